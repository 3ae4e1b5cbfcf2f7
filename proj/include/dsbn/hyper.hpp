#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "dsbn/network.hpp"

namespace dsbn {

// Sorted, duplicate-free vertex names.
using Hyperedge = std::vector<std::string>;

class Hypergraph {
 public:
  Hypergraph() = default;
  // Vertices are the union of the hyperedges plus `extra_vertices`. Hyperedges
  // are sorted and deduplicated; an empty hyperedge throws.
  explicit Hypergraph(std::vector<Hyperedge> hyperedges, std::vector<std::string> extra_vertices = {});
  Hypergraph(std::initializer_list<Hyperedge> hyperedges) : Hypergraph(std::vector<Hyperedge>(hyperedges)) {}

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  // Lexicographically ordered.
  const std::vector<Hyperedge>& hyperedges() const noexcept { return hyperedges_; }
  std::size_t size() const noexcept { return hyperedges_.size(); }

  bool operator==(const Hypergraph&) const = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Hyperedge> hyperedges_;
};

struct HypertreeSeq {
  std::vector<Hyperedge> hyperedges;
  // branch[k] < k is the branch of hyperedges[k]; branch[0] is 0.
  std::vector<std::size_t> branch;
};

// Drops hyperedges strictly contained in another.
Hypergraph reduce_hypergraph(const Hypergraph& h);

// t is a twig of `edges` with branch b (both indices into `edges`).
bool is_twig(const std::vector<Hyperedge>& edges, std::size_t t, std::size_t b);
// Every prefix ends in a twig with the recorded branch.
bool is_construction_sequence(const HypertreeSeq& seq);

// Repeatedly removes the lexicographically largest twig (with its smallest
// branch); the removal order reversed is the sequence. None when stuck.
std::optional<HypertreeSeq> construction_sequence(const Hypergraph& h);

// Reduced hypergraph of the hyperedges {X_i} ∪ parents(i).
Hypergraph induced_hypergraph(const Dag& dag);
Hypergraph induced_hypergraph(const BeliefNetwork& net);

// Network with the same joint as the ⊕ of the hyperedge valuations, one
// valuation per hyperedge over exactly its variables. Nodes are the vertices
// in name order; new vertices of each hyperedge form a complete dag in name
// order below the vertices shared with the branch.
BeliefNetwork network_from_hypertree(const HypertreeSeq& seq, const std::vector<MassFunction>& valuations);

}  // namespace dsbn
