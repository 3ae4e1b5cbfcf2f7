#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsbn/evidence.hpp"
#include "dsbn/indep.hpp"
#include "dsbn/population.hpp"

namespace dsbn {

using NodeSet = std::vector<std::size_t>;

// Directed acyclic graph over named nodes, some of which may be hidden.
class Dag {
 public:
  Dag() = default;
  explicit Dag(const std::vector<std::string>& names, const std::vector<bool>& hidden = {});

  std::size_t add_node(const std::string& name, bool hidden = false);
  // Throws NotAcyclic when the edge would close a cycle. Repeated edges are ignored.
  void add_edge(std::size_t from, std::size_t to);
  void add_edge(const std::string& from, const std::string& to);
  bool would_create_cycle(std::size_t from, std::size_t to) const;

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool hidden(std::size_t i) const { return hidden_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t require_index(std::string_view name) const;

  bool has_edge(std::size_t from, std::size_t to) const;
  const NodeSet& parents(std::size_t i) const { return parents_.at(i); }
  NodeSet children(std::size_t i) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t edge_count() const;

  // Kahn order, smallest index first among ready nodes.
  NodeSet topological_order() const;

  bool operator==(const Dag&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<bool> hidden_;
  std::vector<NodeSet> parents_;
};

// A dag plus one valuation per node over {node} ∪ parents, stored with the
// node first and the parents in node-index order. Vacuous valuations stand in
// for nodes whose conditional belief is unknown.
class BeliefNetwork {
 public:
  BeliefNetwork() = default;
  BeliefNetwork(std::vector<Variable> variables, Dag dag, std::vector<MassFunction> valuations);
  // All-vacuous valuations.
  BeliefNetwork(std::vector<Variable> variables, Dag dag);

  const Dag& dag() const noexcept { return dag_; }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  const MassFunction& valuation(std::size_t i) const { return valuations_.at(i); }
  bool placeholder(std::size_t i) const { return is_vacuous(valuations_.at(i)); }

  Frame node_frame(std::size_t i) const;
  Frame full_frame() const;
  VarNames visible_names() const;

  void set_valuation(std::size_t i, const MassFunction& m);

 private:
  std::vector<Variable> variables_;
  Dag dag_;
  std::vector<MassFunction> valuations_;
};

// ⊕ of all node valuations over the full frame (nodes in index order). A
// factorization into pseudo valuations may yield a pseudo result, which is
// returned as such.
MassFunction joint(const BeliefNetwork& net);

bool d_separated(const Dag& dag, const NodeSet& j, const NodeSet& k, const NodeSet& l);
bool d_separated(const Dag& dag, const VarNames& j, const VarNames& k, const VarNames& l);

bool ci_statement_holds(const MassFunction& m, const VarNames& j, const VarNames& k, const VarNames& l,
                        double tol = 1e-9);

// Default domain of hidden nodes inserted by structure learning.
std::vector<std::string> hidden_domain();

// Node valuations BEL↓{i}∪π(i) | π(i) estimated from the source. Hidden nodes
// and nodes with a hidden parent get vacuous placeholders.
BeliefNetwork fit_valuations(const Dag& structure, const MassFunction& source);
BeliefNetwork fit_valuations(const Dag& structure, const Population& pop);

// Draws n objects from the joint restricted to the visible nodes.
Population sample_network(const BeliefNetwork& net, std::size_t n, std::uint64_t seed);

}  // namespace dsbn
