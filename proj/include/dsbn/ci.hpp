#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dsbn/network.hpp"

namespace dsbn {

// Endpoint mark of a PIPG edge, read at one end.
enum class Mark { Tail, Arrow, Circle };

// Partially oriented including path graph over visible variables.
class Pipg {
 public:
  using Constraint = std::tuple<std::size_t, std::size_t, std::size_t>;

  Pipg() = default;
  explicit Pipg(std::vector<std::string> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::string& name(std::size_t i) const { return nodes_.at(i); }
  const std::vector<std::string>& names() const noexcept { return nodes_; }
  std::size_t require_index(std::string_view name) const;

  bool adjacent(std::size_t a, std::size_t b) const;
  void add_edge(std::size_t a, std::size_t b, Mark at_a = Mark::Circle, Mark at_b = Mark::Circle);
  void remove_edge(std::size_t a, std::size_t b);
  // Mark at `at` on the edge at–other.
  Mark mark(std::size_t at, std::size_t other) const;
  // Marks only move from circle to arrow or tail; anything else throws.
  void orient(std::size_t at, std::size_t other, Mark m);
  bool can_orient(std::size_t at, std::size_t other, Mark m) const;
  NodeSet neighbours(std::size_t a) const;
  // Sorted (a, b) with a < b.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  std::size_t edge_count() const noexcept { return marks_.size(); }

  // a *-> b <-* c.
  bool collider(std::size_t a, std::size_t b, std::size_t c) const;
  // a *-* b *-* c recorded as a non-collider at b, or b has a tail on either edge.
  bool definite_noncollider(std::size_t a, std::size_t b, std::size_t c) const;
  bool directed(std::size_t from, std::size_t to) const;
  bool bidirected(std::size_t a, std::size_t b) const;

  void add_constraint(std::size_t a, std::size_t b, std::size_t c);
  bool has_constraint(std::size_t a, std::size_t b, std::size_t c) const;
  // Stored with the outer nodes ordered (a < c).
  const std::set<Constraint>& constraints() const noexcept { return constraints_; }

  void set_sepset(std::size_t a, std::size_t b, NodeSet s);
  const NodeSet* sepset(std::size_t a, std::size_t b) const;
  const std::map<std::pair<std::size_t, std::size_t>, NodeSet>& sepsets() const noexcept { return sepsets_; }

  bool operator==(const Pipg&) const = default;

 private:
  std::vector<std::string> nodes_;
  // Keyed by (a, b) with a < b; value is (mark at a, mark at b).
  std::map<std::pair<std::size_t, std::size_t>, std::pair<Mark, Mark>> marks_;
  std::set<Constraint> constraints_;
  std::map<std::pair<std::size_t, std::size_t>, NodeSet> sepsets_;
};

// True when the two nodes are judged independent given the conditioning set.
using IndependenceOracle = std::function<bool(std::size_t, std::size_t, std::span<const std::size_t>)>;

// cond_indep of single variables A and B given S; true outright when either
// variable has a single focal set.
bool rk_separated(const Source& source, const std::string& a, const std::string& b, std::span<const std::string> s,
                  double alpha = kDefaultTestAlpha);

// Oracle over the variables of the source frame, in frame order. Sources
// without a sample size are judged by the exact CI statement instead.
IndependenceOracle test_oracle(Source source, double alpha = kDefaultTestAlpha);
// Exact d-separation among `visible` nodes of a generator dag; node i of the
// oracle is visible[i].
IndependenceOracle dsep_oracle(Dag dag, std::vector<std::string> visible);

// All-circle skeleton: a pair is removed once some set of at most k other
// nodes separates it, first among current neighbours, then among all nodes.
// Sepsets of the removed pairs are recorded.
Pipg frkci_skeleton(const std::vector<std::string>& nodes, const IndependenceOracle& independent, std::size_t k);

// Orients unshielded triples: a *-> b <-* c when b is outside sepset(a, c),
// a non-collider constraint otherwise.
Pipg orient_initial(Pipg skeleton);

// Definite discriminating paths between x and y for m, shortest first, then
// lexicographic by node index. Each path runs from x to y.
std::vector<NodeSet> definite_discriminating_paths(const Pipg& g, std::size_t x, std::size_t y, std::size_t m);
std::optional<NodeSet> find_definite_discriminating_path(const Pipg& g, std::size_t x, std::size_t y, std::size_t m);

// Orientation rules to fixpoint: non-collider propagation, directed-path
// arrowheads, constraint colliders, then discriminating paths. Restarts from
// the first rule after every change.
Pipg apply_d_rules(Pipg g);

// Turns o-> into -> and resolves the remaining circles by peeling legally
// removable nodes. Throws FinalizationStuck if no node is legally removable.
Pipg finalize(Pipg g);

struct HiddenInsertion {
  Dag dag;
  std::vector<std::string> warnings;
};

// Every A<->B becomes a parentless hidden node H_AB with H_AB->A, H_AB->B.
HiddenInsertion insert_hidden(const Pipg& finalized);

struct CiOptions {
  std::size_t k = 2;
  double alpha = kDefaultTestAlpha;
};

struct CiResult {
  // Oriented PIPG before finalization.
  Pipg pipg;
  std::optional<Pipg> finalized;
  std::optional<Dag> structure;
  std::optional<BeliefNetwork> network;
  std::vector<std::string> warnings;
};

// Structure-only pipeline on an arbitrary oracle; network stays empty.
CiResult frkci_structure(const std::vector<std::string>& nodes, const IndependenceOracle& independent, std::size_t k);
CiResult frkci(const Source& source, const CiOptions& options = {});
CiResult frkci(const Population& pop, const CiOptions& options = {});

}  // namespace dsbn
