#include <doctest.h>

#include "dsbn/network.hpp"
#include "support/oracles.hpp"

using namespace dsbn;

namespace {

Dag chain_dag() {
  Dag d({"A", "B", "C"});
  d.add_edge("A", "B");
  d.add_edge("B", "C");
  return d;
}

std::vector<Variable> binary_vars(const Dag& d) {
  std::vector<Variable> out;
  for (const auto& n : d.names()) out.push_back({n, {"0", "1"}});
  return out;
}

// Random product-form valuations on each node frame.
BeliefNetwork random_net(const Dag& d, std::mt19937_64& rng) {
  BeliefNetwork net(binary_vars(d), d);
  for (std::size_t i = 0; i < d.size(); ++i) net.set_valuation(i, oracle::random_product_mass(net.node_frame(i), 3, rng));
  return net;
}

}  // namespace

TEST_CASE("dag basics") {
  auto d = chain_dag();
  CHECK(d.edge_count() == 2);
  CHECK(d.parents(2) == NodeSet{1});
  CHECK(d.children(0) == NodeSet{1});
  CHECK_THROWS_WITH_AS(d.add_edge("C", "A"), doctest::Contains("not acyclic"), Error);
  CHECK_THROWS_AS(d.add_edge("A", "A"), Error);
  CHECK(d.topological_order() == NodeSet{0, 1, 2});
  CHECK_THROWS_AS(d.add_node("A"), Error);
}

TEST_CASE("d-separation") {
  auto chain = chain_dag();
  CHECK(d_separated(chain, VarNames{"A"}, VarNames{"C"}, VarNames{"B"}));
  CHECK_FALSE(d_separated(chain, VarNames{"A"}, VarNames{"C"}, VarNames{}));

  Dag collider({"A", "B", "C"});
  collider.add_edge("A", "B");
  collider.add_edge("C", "B");
  CHECK(d_separated(collider, VarNames{"A"}, VarNames{"C"}, VarNames{}));
  CHECK_FALSE(d_separated(collider, VarNames{"A"}, VarNames{"C"}, VarNames{"B"}));

  // Conditioning on a descendant of the collider also opens it.
  collider.add_node("D");
  collider.add_edge("B", "D");
  CHECK_FALSE(d_separated(collider, VarNames{"A"}, VarNames{"C"}, VarNames{"D"}));

  Dag example({"A", "B", "C", "D", "E"});
  example.add_edge("A", "B");
  example.add_edge("C", "B");
  example.add_edge("C", "D");
  example.add_edge("D", "E");
  example.add_edge("E", "A");
  CHECK(d_separated(example, VarNames{"A"}, VarNames{"C"}, VarNames{"D", "E"}));
  CHECK(d_separated(example, VarNames{"A"}, VarNames{"C"}, VarNames{"D"}));
  CHECK_FALSE(d_separated(example, VarNames{"A"}, VarNames{"C"}, VarNames{"B", "D"}));
  CHECK_THROWS_AS(d_separated(example, VarNames{"A"}, VarNames{"Q"}, VarNames{}), Error);
  CHECK_THROWS_AS(d_separated(example, VarNames{"A"}, VarNames{"A"}, VarNames{}), Error);
}

TEST_CASE("joint of simple networks") {
  std::mt19937_64 rng(41);
  Dag single({"A"});
  BeliefNetwork one(binary_vars(single), single);
  auto m = oracle::random_mass(one.node_frame(0), 2, rng);
  one.set_valuation(0, m);
  CHECK(max_focal_difference(joint(one), m) < 1e-15);

  Dag two({"A", "B"});
  auto net = random_net(two, rng);
  auto j = joint(net);
  CHECK(ci_statement_holds(j, VarNames{"A"}, VarNames{"B"}, VarNames{}));
  for (const auto& [set, mass] : j.focals()) CHECK(factorize_product(j.frame(), set).has_value());

  // Order invariance: reversing node insertion order gives the same joint.
  auto chain = chain_dag();
  auto cnet = random_net(chain, rng);
  Dag reversed({"C", "B", "A"});
  reversed.add_edge("A", "B");
  reversed.add_edge("B", "C");
  BeliefNetwork rnet(binary_vars(reversed), reversed);
  for (std::size_t i = 0; i < 3; ++i) rnet.set_valuation(2 - i, cnet.valuation(i));
  CHECK(max_focal_difference(joint(cnet), joint(rnet)) < 1e-12);
}

TEST_CASE("conditional independence statements") {
  std::mt19937_64 rng(43);
  auto f = oracle::binary_frame(2);
  CHECK(ci_statement_holds(MassFunction::vacuous(f), VarNames{"X1"}, VarNames{"X2"}, VarNames{}));
  auto dependent = MassFunction::from_focals(f, {{ConfigSet::singleton(0), 0.5}, {ConfigSet::singleton(3), 0.5}});
  CHECK_FALSE(ci_statement_holds(dependent, VarNames{"X1"}, VarNames{"X2"}, VarNames{}));
  CHECK(ci_statement_holds(dependent, VarNames{}, VarNames{"X2"}, VarNames{}));

  // d-separation in a chain implies the CI statement on the joint.
  for (int trial = 0; trial < 20; ++trial) {
    auto net = random_net(chain_dag(), rng);
    auto j = joint(net);
    CHECK(ci_statement_holds(j, VarNames{"A"}, VarNames{"C"}, VarNames{"B"}, 1e-9));
  }
}

TEST_CASE("fitting valuations") {
  std::mt19937_64 rng(47);
  auto chain = chain_dag();
  auto net = random_net(chain, rng);
  auto j = joint(net);
  auto fitted = fit_valuations(chain, j);
  CHECK(max_focal_difference(fitted.valuation(0), marginalize(j, VarNames{"A"})) < 1e-12);
  CHECK(max_focal_difference(joint(fitted), j) < 1e-8);

  auto pop = sample_network(net, 20000, 5);
  auto from_data = fit_valuations(chain, pop);
  CHECK(max_focal_difference(joint(from_data), j) < 0.03);

  Dag latent({"H", "A"}, {true, false});
  latent.add_edge("H", "A");
  auto fa = build_frame({{"A", {"0", "1"}}});
  auto placeholder = fit_valuations(latent, MassFunction::vacuous(fa));
  CHECK(placeholder.placeholder(0));
  CHECK(placeholder.placeholder(1));
}

TEST_CASE("sampling networks") {
  Dag single({"A"});
  BeliefNetwork vac(binary_vars(single), single);
  for (const auto& o : sample_network(vac, 5, 1).objects) CHECK(o.value_set == ConfigSet::full(2));

  BeliefNetwork det(binary_vars(single), single);
  det.set_valuation(0, MassFunction::categorical(det.node_frame(0), ConfigSet::singleton(1)));
  auto pop = sample_network(det, 5, 1);
  for (const auto& o : pop.objects) CHECK(o.value_set == ConfigSet::singleton(1));

  std::mt19937_64 rng(53);
  auto net = random_net(chain_dag(), rng);
  auto a = sample_network(net, 100, 3);
  auto b = sample_network(net, 100, 3);
  for (std::size_t i = 0; i < 100; ++i) CHECK(a.objects[i].value_set == b.objects[i].value_set);
}
