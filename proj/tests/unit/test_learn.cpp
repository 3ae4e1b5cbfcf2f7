#include <doctest.h>

#include "dsbn/learn.hpp"
#include "support/oracles.hpp"

using namespace dsbn;

namespace {

const ConfigSet A = ConfigSet::singleton(0);
const ConfigSet AB = ConfigSet::full(2);

MassFunction bayesian(const Frame& f, const std::vector<double>& p) {
  FocalMap focals;
  for (std::uint32_t c = 0; c < p.size(); ++c)
    if (p[c] > 0) focals[ConfigSet::singleton(c)] = p[c];
  return MassFunction::from_focals(f, focals);
}

// P(X1) P(X3|X1) P(X2|X3) over frame order X1, X2, X3.
std::vector<double> chain_probabilities(const Frame& f) {
  double p1[2] = {0.3, 0.7};
  double p3[2][2] = {{0.8, 0.2}, {0.25, 0.75}};
  double p2[2][2] = {{0.9, 0.1}, {0.35, 0.65}};
  std::vector<double> p(8);
  for (std::uint32_t c = 0; c < 8; ++c) {
    auto v = f.decode(c);
    p[c] = p1[v[0]] * p3[v[0]][v[2]] * p2[v[2]][v[1]];
  }
  return p;
}

// X1, X2 independent coins; X3 depends on both.
std::vector<double> collider_probabilities(const Frame& f) {
  double p1[2] = {0.4, 0.6}, p2[2] = {0.55, 0.45};
  double p3[2][2] = {{0.9, 0.3}, {0.2, 0.7}};
  std::vector<double> p(8);
  for (std::uint32_t c = 0; c < 8; ++c) {
    auto v = f.decode(c);
    double on = p3[v[0]][v[1]];
    p[c] = p1[v[0]] * p2[v[1]] * (v[2] ? on : 1 - on);
  }
  return p;
}

}  // namespace

TEST_CASE("delta") {
  auto f = build_frame({{"X", {"a", "b"}}});
  auto ref = MassFunction::from_focals(f, {{A, 0.5}, {AB, 0.5}});
  CHECK(delta(ref, ref) == 0.0);
  CHECK(std::isinf(delta(ref, MassFunction::categorical(f, A))));
  auto approx = MassFunction::from_focals(f, {{A, 0.2}, {AB, 0.8}});
  // Q_ref(a) = 1, Q_approx(a) = 1; Q_ref(ab) = 0.5, Q_approx(ab) = 0.8.
  CHECK(delta(ref, approx) == doctest::Approx(0.5 * std::log(1.6)));
  CHECK_THROWS_AS(delta(ref, MassFunction::vacuous(build_frame({{"Y", {"a", "b"}}}))), Error);
}

TEST_CASE("ternary background on probability chains") {
  auto f = oracle::binary_frame(3);
  auto chain = bayesian(f, chain_probabilities(f));
  auto mediated = ternary_background(chain, "X1", "X2", "X3");
  auto truth = marginalize(chain, VarNames{"X1", "X2"});
  CHECK(delta(truth, mediated) < 1e-12);
  CHECK(max_focal_difference(truth, mediated) < 1e-12);
  auto swapped = ternary_background(chain, "X2", "X1", "X3");
  CHECK(max_focal_difference(mediated, swapped) < 1e-12);

  // A mediator independent of both reduces to the product of marginals.
  auto g = oracle::binary_frame(2);
  std::mt19937_64 rng(59);
  auto pair = oracle::random_mass(g, 4, rng);
  auto third = oracle::random_mass(build_frame({{"X3", {"0", "1"}}}), 2, rng);
  auto joint = combine(pair, third);
  auto via = ternary_background(joint, "X1", "X2", "X3");
  auto product = combine(marginalize(joint, VarNames{"X1"}), marginalize(joint, VarNames{"X2"}));
  CHECK(max_focal_difference(via, product) < 1e-12);
}

TEST_CASE("DEP and criterion on probability models") {
  auto f = oracle::binary_frame(3);
  auto chain = bayesian(f, chain_probabilities(f));
  CHECK(dep_bn(chain, "X1", "X2") < 1e-12);
  CHECK(dep_bn(chain, "X1", "X3") > 1e-3);
  CHECK(dep_bn(chain, "X3", "X2") > 1e-3);
  CHECK(std::min(dep_bn(chain, "X1", "X3"), dep_bn(chain, "X3", "X2")) > dep_bn(chain, "X1", "X2"));
  CHECK(criterion(chain, "X1", "X2", "X3") < 0.0);

  auto collider = bayesian(f, collider_probabilities(f));
  CHECK(dep_bn(collider, "X1", "X2") < 1e-12);
  CHECK(criterion(collider, "X1", "X2", "X3") >= 0.0);

  // Direct computation of the chain's DEP(X1,X3) as δ of the product approximation
  // (the only mediator X2 cannot do better than the truth itself).
  auto truth13 = marginalize(chain, VarNames{"X1", "X3"});
  auto prod13 = combine(marginalize(chain, VarNames{"X1"}), marginalize(chain, VarNames{"X3"}));
  double d_prod = delta(truth13, prod13);
  double d_med = delta(truth13, ternary_background(chain, "X1", "X3", "X2"));
  CHECK(dep_bn(chain, "X1", "X3") == doctest::Approx(std::min(d_prod, d_med)));

  // With a mediator unrelated to both, the two terms agree: sign of (1 - α)·δ(product).
  auto g = oracle::binary_frame(2);
  auto dep2 = bayesian(g, {0.4, 0.1, 0.1, 0.4});
  auto joint = combine(dep2, MassFunction::from_focals(build_frame({{"X3", {"0", "1"}}}), {{A, 0.3}, {AB, 0.7}}));
  double c = criterion(joint, "X1", "X2", "X3", 0.5);
  double dp = delta(marginalize(joint, VarNames{"X1", "X2"}),
                    combine(marginalize(joint, VarNames{"X1"}), marginalize(joint, VarNames{"X2"})));
  CHECK(c == doctest::Approx(0.5 * dp));
}

TEST_CASE("random models") {
  auto tree = random_model({ModelShape::Tree, 3, 2, 3, 1});
  CHECK(tree.dag().edge_count() == 2);
  auto again = random_model({ModelShape::Tree, 3, 2, 3, 1});
  CHECK(tree.dag() == again.dag());
  for (std::size_t i = 0; i < 3; ++i) CHECK(max_focal_difference(tree.valuation(i), again.valuation(i)) == 0.0);
  auto poly = random_model({ModelShape::Polytree, 6, 2, 3, 4});
  CHECK(poly.dag().edge_count() == 5);
  CHECK(validate_mass(joint(poly)).valid);
  CHECK_FALSE(joint(poly).pseudo());
  CHECK_THROWS_AS(random_model({ModelShape::Tree, 2, 2, 3, 1}), Error);
  CHECK_THROWS_AS(random_model({ModelShape::Tree, 25, 2, 3, 1}), Error);
}

TEST_CASE("d-separation implies CI on joints of random polytrees") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto net = random_model({ModelShape::Polytree, 5, 2, 2, seed});
    auto j = joint(net);
    const auto& dag = net.dag();
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = a + 1; b < 5; ++b)
        for (std::uint32_t mask = 0; mask < 32; ++mask) {
          if (mask & ((1u << a) | (1u << b)) || __builtin_popcount(mask) > 2) continue;
          NodeSet given;
          VarNames given_names;
          for (std::size_t v = 0; v < 5; ++v)
            if (mask & (1u << v)) {
              given.push_back(v);
              given_names.push_back(dag.name(v));
            }
          if (!d_separated(dag, NodeSet{a}, NodeSet{b}, given)) continue;
          CHECK(ci_statement_holds(j, VarNames{dag.name(a)}, VarNames{dag.name(b)}, given_names, 1e-8));
        }
  }
}

TEST_CASE("tree learning on exact joints") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto net = random_model({ModelShape::Tree, 6, 2, 3, seed});
    auto j = joint(net);
    auto learned = learn_tree(j);
    CHECK(learned.warnings.empty());
    CHECK(summarize_structure(learned.network.dag()).edges == summarize_structure(net.dag()).edges);
    CHECK(delta(j, joint(learned.network)) < 1e-6);
  }
}

TEST_CASE("tree learning attaches an independent variable and warns on no dependence") {
  auto f = oracle::binary_frame(2);
  auto dep2 = bayesian(f, {0.4, 0.1, 0.1, 0.4});
  auto joint = combine(dep2, MassFunction::from_focals(build_frame({{"X3", {"0", "1"}}}), {{A, 0.3}, {AB, 0.7}}));
  auto learned = learn_tree(joint);
  auto edges = summarize_structure(learned.network.dag()).edges;
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == std::pair<std::string, std::string>{"X1", "X2"});

  auto independent = combine(combine(MassFunction::from_focals(build_frame({{"X1", {"0", "1"}}}), {{A, 0.5}, {AB, 0.5}}),
                                     MassFunction::from_focals(build_frame({{"X2", {"0", "1"}}}), {{A, 0.2}, {AB, 0.8}})),
                             MassFunction::from_focals(build_frame({{"X3", {"0", "1"}}}), {{A, 0.6}, {AB, 0.4}}));
  auto forest = learn_tree(independent);
  CHECK(forest.network.dag().edge_count() == 0);
  CHECK(forest.warnings.size() == 1);
  CHECK_THROWS_AS(learn_tree(dep2), Error);
}

TEST_CASE("polytree learning on exact joints") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto net = random_model({ModelShape::Polytree, 6, 2, 3, seed});
    auto j = joint(net);
    auto learned = learn_polytree(j);
    CHECK(summarize_structure(learned.network.dag()) == summarize_structure(net.dag()));
  }
}

TEST_CASE("polytree learning on a pure chain declares no colliders") {
  auto f = oracle::binary_frame(3);
  auto chain = bayesian(f, chain_probabilities(f));
  auto learned = learn_polytree(chain);
  CHECK(summarize_structure(learned.network.dag()).colliders.empty());
  auto collider = bayesian(f, collider_probabilities(f));
  auto found = summarize_structure(learn_polytree(collider).network.dag());
  REQUIRE(found.colliders.size() == 1);
  CHECK(found.colliders[0] == std::tuple<std::string, std::string, std::string>{"X1", "X3", "X2"});
  PolytreeOptions literal{1.0, SignConvention::NegativeMeansCollider};
  CHECK(summarize_structure(learn_polytree(collider, literal).network.dag()).colliders.empty());
}
