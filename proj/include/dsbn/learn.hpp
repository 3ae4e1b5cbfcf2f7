#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dsbn/network.hpp"

namespace dsbn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Σ_{A: m_ref(A) > 0} m_ref(A)·|ln(Q_ref(A) / Q_approx(A))|, +∞ when some
// needed Q_approx(A) is not positive. Frames must span the same variables.
double delta(const MassFunction& reference, const MassFunction& approx);

// (BEL↓X1X3|X3 ⊕ BEL↓X2X3|X3 ⊕ BEL↓X3)↓X1X2: the X1×X2 marginal as mediated by X3.
MassFunction ternary_background(const MassFunction& source, const std::string& x1, const std::string& x2,
                                const std::string& x3);

// Dependence distance: the smaller of the product approximation's δ and the
// best single-mediator δ against the true X1×X2 marginal.
double dep_bn(const MassFunction& source, const std::string& x1, const std::string& x2);

// δ(mediated, true) − α·δ(product, true) for the pair X1, X2 meeting at X3.
double criterion(const MassFunction& source, const std::string& x1, const std::string& x2, const std::string& x3,
                 double alpha = 1.0);

// Reuses pair marginals and anti-conditionals across many δ evaluations.
class DependenceCache {
 public:
  explicit DependenceCache(MassFunction source);

  const MassFunction& source() const noexcept { return source_; }
  const MassFunction& marginal(const std::vector<std::size_t>& vars);
  const MassFunction& conditional(std::size_t var, std::size_t given);

  MassFunction product(std::size_t a, std::size_t b);
  MassFunction ternary(std::size_t a, std::size_t b, std::size_t mediator);
  double delta_product(std::size_t a, std::size_t b);
  double delta_ternary(std::size_t a, std::size_t b, std::size_t mediator);
  double dep(std::size_t a, std::size_t b);
  double criterion(std::size_t a, std::size_t b, std::size_t meeting, double alpha);

 private:
  MassFunction source_;
  std::map<std::vector<std::size_t>, MassFunction> marginals_;
  std::map<std::pair<std::size_t, std::size_t>, MassFunction> conditionals_;
  std::map<std::pair<std::size_t, std::size_t>, double> product_deltas_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> ternary_deltas_;
};

struct LearnResult {
  BeliefNetwork network;
  std::vector<std::string> warnings;
};

// Undirected edges as index pairs (first < second) over the source frame order.
using Skeleton = std::vector<std::pair<std::size_t, std::size_t>>;

// Greedy maximum-DEP spanning tree, grown from the strongest pair. Returns an empty skeleton
// when every DEP is zero.
Skeleton dep_spanning_tree(DependenceCache& cache);

LearnResult learn_tree(const MassFunction& source, const std::optional<std::string>& root = std::nullopt);
LearnResult learn_tree(const Population& pop, const std::optional<std::string>& root = std::nullopt);

enum class SignConvention {
  // Head-to-head when the criterion is non-negative.
  NonNegativeMeansCollider,
  // The literal reading: head-to-head when the criterion is negative.
  NegativeMeansCollider,
};

struct PolytreeOptions {
  double alpha = 1.0;
  SignConvention sign = SignConvention::NonNegativeMeansCollider;
};

LearnResult learn_polytree(const MassFunction& source, const PolytreeOptions& options = {});
LearnResult learn_polytree(const Population& pop, const PolytreeOptions& options = {});

// Skeleton plus unshielded colliders (a, meeting, b) with a < b, by name.
struct StructureSummary {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::tuple<std::string, std::string, std::string>> colliders;

  bool operator==(const StructureSummary&) const = default;
};

StructureSummary summarize_structure(const Dag& dag);

enum class ModelShape { Tree, Polytree };

struct ModelSpec {
  ModelShape shape = ModelShape::Tree;
  std::size_t n_vars = 6;
  std::size_t domain_size = 2;
  std::size_t focals_per_valuation = 3;
  std::uint64_t seed = 0;
};

// Random belief network of the requested shape with product-form focal sets.
// Head-to-head nodes of polytree models are always sinks. Every d-connected
// pair of variables is dependent in the joint.
BeliefNetwork random_model(const ModelSpec& spec);

// Same valuation scheme on a fixed dag; shape and n_vars of the spec are ignored.
// Hidden flags are kept, so hidden nodes stay out of sampled data.
BeliefNetwork random_network(const Dag& dag, const ModelSpec& spec);

}  // namespace dsbn
