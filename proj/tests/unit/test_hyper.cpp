#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dsbn/hyper.hpp"
#include "support/oracles.hpp"

using namespace dsbn;

namespace {

using Edges = std::vector<std::set<std::string>>;

// Twig test written from the definition, over std::set.
bool twig_by_definition(const Edges& edges, std::size_t t, std::size_t b) {
  if (t == b) return false;
  bool meets = false;
  for (const auto& v : edges[t]) meets = meets || edges[b].count(v);
  if (!meets) return false;
  for (std::size_t h = 0; h < edges.size(); ++h) {
    if (h == t) continue;
    for (const auto& v : edges[t])
      if (edges[h].count(v) && !edges[b].count(v)) return false;
  }
  return true;
}

// Tries every ordering of the hyperedges.
bool hypertree_by_search(const Hypergraph& h) {
  std::vector<std::size_t> order(h.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  do {
    bool ok = true;
    for (std::size_t k = 1; k < order.size() && ok; ++k) {
      Edges prefix;
      for (std::size_t i = 0; i <= k; ++i) {
        const auto& e = h.hyperedges()[order[i]];
        prefix.emplace_back(e.begin(), e.end());
      }
      bool any = false;
      for (std::size_t b = 0; b < k && !any; ++b) any = twig_by_definition(prefix, k, b);
      ok = any;
    }
    if (ok) return true;
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

MassFunction random_valuation(const Hyperedge& e, std::mt19937_64& rng) {
  std::vector<Variable> vars;
  for (const auto& v : e) vars.push_back({v, oracle::binary_domain()});
  return oracle::random_product_mass(Frame(vars), 3, rng);
}

}  // namespace

TEST_CASE("reduce hypergraph") {
  CHECK(reduce_hypergraph(Hypergraph({{"A"}, {"A", "B"}})).hyperedges() == std::vector<Hyperedge>{{"A", "B"}});
  Hypergraph anti({{"A", "B"}, {"B", "C"}});
  CHECK(reduce_hypergraph(anti) == anti);
  Hypergraph dup({{"B", "A"}, {"A", "B"}, {"C"}});
  CHECK(dup.size() == 2);
  CHECK(reduce_hypergraph(dup).hyperedges() == std::vector<Hyperedge>{{"A", "B"}, {"C"}});
  CHECK_THROWS_AS(Hypergraph({{}}), Error);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Hyperedge> edges;
    for (int k = 0; k < 5; ++k) {
      Hyperedge e;
      for (const char* v : {"A", "B", "C", "D"})
        if (rng() % 2) e.push_back(v);
      if (!e.empty()) edges.push_back(e);
    }
    if (edges.empty()) continue;
    auto once = reduce_hypergraph(Hypergraph(edges));
    CHECK(reduce_hypergraph(once) == once);
  }
}

TEST_CASE("construction sequences") {
  auto chain = construction_sequence(Hypergraph({{"B", "C"}, {"A", "B"}}));
  REQUIRE(chain);
  CHECK(chain->hyperedges == std::vector<Hyperedge>{{"A", "B"}, {"B", "C"}});
  CHECK(chain->branch == std::vector<std::size_t>{0, 0});

  auto single = construction_sequence(Hypergraph({{"A", "B"}}));
  REQUIRE(single);
  CHECK(single->hyperedges.size() == 1);

  Hypergraph cyclic({{"A", "B", "C"}, {"C", "D"}, {"D", "E"}, {"A", "E"}});
  CHECK_FALSE(hypertree_by_search(cyclic));
  CHECK_FALSE(construction_sequence(cyclic));
  CHECK_FALSE(construction_sequence(Hypergraph({{"A"}, {"B"}})));

  // Greedy elimination agrees with exhaustive search; found sequences are valid.
  std::mt19937_64 rng(8);
  int trees = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Hyperedge> edges;
    std::size_t count = 1 + rng() % 5;
    for (std::size_t k = 0; k < count; ++k) {
      Hyperedge e;
      for (const char* v : {"A", "B", "C", "D", "E"})
        if (rng() % 3 == 0) e.push_back(v);
      if (!e.empty()) edges.push_back(e);
    }
    if (edges.empty()) continue;
    Hypergraph h(edges);
    auto seq = construction_sequence(h);
    CHECK(seq.has_value() == hypertree_by_search(h));
    if (!seq) continue;
    ++trees;
    CHECK(is_construction_sequence(*seq));
    for (std::size_t k = 1; k < seq->hyperedges.size(); ++k) {
      Edges prefix;
      for (std::size_t i = 0; i <= k; ++i) prefix.emplace_back(seq->hyperedges[i].begin(), seq->hyperedges[i].end());
      CHECK(twig_by_definition(prefix, k, seq->branch[k]));
    }
  }
  CHECK(trees > 30);
}

TEST_CASE("induced hypergraph") {
  Dag ab({"A", "B"});
  ab.add_edge("A", "B");
  CHECK(induced_hypergraph(ab).hyperedges() == std::vector<Hyperedge>{{"A", "B"}});
  CHECK(induced_hypergraph(Dag({"A", "B"})).hyperedges() == std::vector<Hyperedge>{{"A"}, {"B"}});

  Dag example({"A", "B", "C", "D", "E"});
  example.add_edge("A", "B");
  example.add_edge("C", "B");
  example.add_edge("C", "D");
  example.add_edge("D", "E");
  example.add_edge("E", "A");
  CHECK(induced_hypergraph(example).hyperedges() ==
        std::vector<Hyperedge>{{"A", "B", "C"}, {"A", "E"}, {"C", "D"}, {"D", "E"}});
}

TEST_CASE("network from a two-edge chain") {
  std::mt19937_64 rng(1);
  auto seq = *construction_sequence(Hypergraph({{"A", "B"}, {"B", "C"}}));
  std::vector<MassFunction> vals{random_valuation({"A", "B"}, rng), random_valuation({"B", "C"}, rng)};
  auto net = network_from_hypertree(seq, vals);
  const auto& dag = net.dag();
  CHECK(dag.names() == std::vector<std::string>{"A", "B", "C"});
  CHECK(dag.edges() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  CHECK(max_focal_difference(joint(net), combine(vals[0], vals[1])) < 1e-9);
  // C's valuation is the gathered hyperedge anti-conditioned on B.
  auto gathered = combine(vals[1], marginalize(vals[0], VarNames{"B"}));
  CHECK(max_focal_difference(net.valuation(2), anti_condition(gathered, VarNames{"B"})) < 1e-9);
}

TEST_CASE("network from a single hyperedge") {
  std::mt19937_64 rng(2);
  auto m = random_valuation({"A", "B", "C"}, rng);
  auto net = network_from_hypertree(*construction_sequence(Hypergraph({{"A", "B", "C"}})), {m});
  CHECK(net.dag().edge_count() == 3);
  CHECK(net.dag().has_edge(0, 1));
  CHECK(net.dag().has_edge(1, 2));
  CHECK(max_focal_difference(joint(net), m) < 1e-9);

  std::vector<Variable> vars{{"A", oracle::binary_domain()}, {"B", oracle::binary_domain()}};
  auto vac = network_from_hypertree(*construction_sequence(Hypergraph({{"A", "B"}})), {MassFunction::vacuous(Frame(vars))});
  CHECK(is_vacuous(joint(vac)));
}

TEST_CASE("network from random hypertrees") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    Hypergraph h(oracle::random_hypertree_edges(5, 6, rng));
    auto seq = construction_sequence(h);
    REQUIRE(seq);
    std::vector<MassFunction> vals;
    for (const auto& e : seq->hyperedges) vals.push_back(random_valuation(e, rng));
    MassFunction whole = vals[0];
    try {
      for (std::size_t k = 1; k < vals.size(); ++k) whole = combine(whole, vals[k]);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::TotalConflict);
      continue;
    }
    auto net = network_from_hypertree(*seq, vals);
    CHECK(max_focal_difference(joint(net), whole) < 1e-9);
    CHECK(reduce_hypergraph(induced_hypergraph(net)) == reduce_hypergraph(h));
  }
}

TEST_CASE("network from hypertree rejects bad input") {
  std::mt19937_64 rng(3);
  auto seq = *construction_sequence(Hypergraph({{"A", "B"}, {"B", "C"}}));
  CHECK_THROWS_AS(network_from_hypertree(seq, {random_valuation({"A", "B"}, rng)}), Error);
  CHECK_THROWS_AS(network_from_hypertree(seq, {random_valuation({"A", "B"}, rng), random_valuation({"A", "C"}, rng)}),
                  Error);
  HypertreeSeq broken{{{"A", "B"}, {"C", "D"}}, {0, 0}};
  CHECK_THROWS_AS(network_from_hypertree(broken, {random_valuation({"A", "B"}, rng), random_valuation({"C", "D"}, rng)}),
                  Error);
}
