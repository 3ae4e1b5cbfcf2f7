#include "dsbn/learn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>

namespace dsbn {

namespace {

constexpr double kZeroDep = 1e-10;
constexpr double kZeroCommonality = 1e-12;
constexpr std::size_t kMaxPolytreeParents = 3;
constexpr std::size_t kMaxModelAttempts = 1000;
constexpr double kMinPairDependence = 1e-6;
constexpr double kMinEdgeDependence = 0.1;

// Larger first; +∞ beats any finite value and ties keep the earlier candidate.
bool better(double candidate, double incumbent) { return candidate > incumbent; }

std::vector<std::size_t> require_three(const Frame& frame) {
  if (frame.size() < 3) throw Error(Errc::InvalidArgument, "structure learning needs at least 3 variables");
  std::vector<std::size_t> all(frame.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace

double delta(const MassFunction& reference, const MassFunction& approx) {
  if (!reference.frame().same_variables(approx.frame()))
    throw Error(Errc::FrameMismatch, "delta needs masses over the same variables");
  auto aligned = vacuous_extend(approx, reference.frame());
  double total = 0.0;
  for (const auto& [set, mass] : reference.focals()) {
    if (mass <= 0.0) continue;
    double q_ref = commonality(reference, set);
    double q_approx = commonality(aligned, set);
    if (q_approx <= kZeroCommonality || q_ref <= 0.0) return kInfinity;
    total += mass * std::abs(std::log(q_ref / q_approx));
  }
  return total;
}

// ---------------------------------------------------------------------------

DependenceCache::DependenceCache(MassFunction source) : source_(std::move(source)) {}

const MassFunction& DependenceCache::marginal(const std::vector<std::size_t>& vars) {
  auto key = vars;
  std::sort(key.begin(), key.end());
  auto it = marginals_.find(key);
  if (it != marginals_.end()) return it->second;
  VarNames names;
  for (auto v : key) names.push_back(source_.frame().variable(v).name);
  return marginals_.emplace(key, marginalize(source_, names)).first->second;
}

const MassFunction& DependenceCache::conditional(std::size_t var, std::size_t given) {
  auto it = conditionals_.find({var, given});
  if (it != conditionals_.end()) return it->second;
  VarNames g{source_.frame().variable(given).name};
  auto m = anti_condition(marginal({var, given}), g);
  return conditionals_.emplace(std::pair{var, given}, std::move(m)).first->second;
}

MassFunction DependenceCache::product(std::size_t a, std::size_t b) {
  const auto& pair = marginal({a, b});
  return vacuous_extend(combine(marginal({a}), marginal({b})), pair.frame());
}

MassFunction DependenceCache::ternary(std::size_t a, std::size_t b, std::size_t mediator) {
  const auto& pair = marginal({a, b});
  auto mediated = combine(combine(conditional(a, mediator), conditional(b, mediator)), marginal({mediator}));
  return vacuous_extend(marginalize(mediated, pair.frame().names()), pair.frame());
}

double DependenceCache::delta_product(std::size_t a, std::size_t b) {
  auto key = std::minmax(a, b);
  auto it = product_deltas_.find(key);
  if (it != product_deltas_.end()) return it->second;
  double d;
  try {
    d = delta(marginal({a, b}), product(a, b));
  } catch (const Error& e) {
    if (e.code() != Errc::TotalConflict) throw;
    d = kInfinity;
  }
  product_deltas_.emplace(key, d);
  return d;
}

double DependenceCache::delta_ternary(std::size_t a, std::size_t b, std::size_t mediator) {
  auto [lo, hi] = std::minmax(a, b);
  auto key = std::tuple{lo, hi, mediator};
  auto it = ternary_deltas_.find(key);
  if (it != ternary_deltas_.end()) return it->second;
  double d;
  try {
    d = delta(marginal({a, b}), ternary(lo, hi, mediator));
  } catch (const Error& e) {
    if (e.code() != Errc::TotalConflict && e.code() != Errc::ZeroCommonality) throw;
    d = kInfinity;
  }
  ternary_deltas_.emplace(key, d);
  return d;
}

double DependenceCache::dep(std::size_t a, std::size_t b) {
  double best = delta_product(a, b);
  for (std::size_t m = 0; m < source_.frame().size(); ++m)
    if (m != a && m != b) best = std::min(best, delta_ternary(a, b, m));
  return best;
}

double DependenceCache::criterion(std::size_t a, std::size_t b, std::size_t meeting, double alpha) {
  if (!(alpha > 0.0)) throw Error(Errc::InvalidArgument, "alpha must be positive");
  double mediated = delta_ternary(a, b, meeting);
  double product = delta_product(a, b);
  if (std::isinf(mediated) && std::isinf(product)) return 0.0;
  return mediated - alpha * product;
}

MassFunction ternary_background(const MassFunction& source, const std::string& x1, const std::string& x2,
                                const std::string& x3) {
  const auto& f = source.frame();
  auto a = f.require_index(x1), b = f.require_index(x2), m = f.require_index(x3);
  if (a == b || a == m || b == m) throw Error(Errc::InvalidArgument, "three distinct variables are required");
  DependenceCache cache(source);
  return cache.ternary(a, b, m);
}

double dep_bn(const MassFunction& source, const std::string& x1, const std::string& x2) {
  const auto& f = source.frame();
  auto a = f.require_index(x1), b = f.require_index(x2);
  if (a == b) throw Error(Errc::InvalidArgument, "two distinct variables are required");
  DependenceCache cache(source);
  return cache.dep(a, b);
}

double criterion(const MassFunction& source, const std::string& x1, const std::string& x2, const std::string& x3,
                 double alpha) {
  const auto& f = source.frame();
  auto a = f.require_index(x1), b = f.require_index(x2), m = f.require_index(x3);
  if (a == b || a == m || b == m) throw Error(Errc::InvalidArgument, "three distinct variables are required");
  DependenceCache cache(source);
  return cache.criterion(a, b, m, alpha);
}

// ---------------------------------------------------------------------------

Skeleton dep_spanning_tree(DependenceCache& cache) {
  const std::size_t n = cache.source().frame().size();
  std::vector<std::vector<double>> dep(n, std::vector<double>(n, 0.0));
  bool any = false;
  std::pair<std::size_t, std::size_t> first{0, 1};
  double first_value = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      dep[i][j] = dep[j][i] = cache.dep(i, j);
      any |= dep[i][j] > kZeroDep;
      if (better(dep[i][j], first_value)) {
        first_value = dep[i][j];
        first = {i, j};
      }
    }
  if (!any) return {};

  Skeleton edges{first};
  std::vector<bool> connected(n, false);
  connected[first.first] = connected[first.second] = true;
  for (std::size_t added = 2; added < n; ++added) {
    std::pair<std::size_t, std::size_t> pick{n, n};
    double value = -1.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (!connected[p]) continue;
      for (std::size_t r = 0; r < n; ++r) {
        if (connected[r]) continue;
        if (better(dep[p][r], value)) {
          value = dep[p][r];
          pick = {p, r};
        }
      }
    }
    connected[pick.second] = true;
    edges.emplace_back(std::min(pick.first, pick.second), std::max(pick.first, pick.second));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

namespace {

Dag empty_dag(const Frame& frame) { return Dag(frame.names()); }

std::vector<std::vector<std::size_t>> adjacency(std::size_t n, const Skeleton& skeleton) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : skeleton) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

const char* kNoDependence = "every pairwise DEP is zero; returning an edgeless network";

}  // namespace

LearnResult learn_tree(const MassFunction& source, const std::optional<std::string>& root) {
  const auto& frame = source.frame();
  require_three(frame);
  std::size_t start = root ? frame.require_index(*root) : 0;
  DependenceCache cache(source);
  auto skeleton = dep_spanning_tree(cache);
  Dag dag = empty_dag(frame);
  std::vector<std::string> warnings;
  if (skeleton.empty()) {
    warnings.emplace_back(kNoDependence);
  } else {
    auto adj = adjacency(frame.size(), skeleton);
    std::vector<bool> seen(frame.size(), false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        dag.add_edge(v, w);
        queue.push_back(w);
      }
    }
  }
  return {fit_valuations(dag, source), std::move(warnings)};
}

LearnResult learn_tree(const Population& pop, const std::optional<std::string>& root) {
  return learn_tree(empirical_mass(pop), root);
}

LearnResult learn_polytree(const MassFunction& source, const PolytreeOptions& options) {
  const auto& frame = source.frame();
  const std::size_t n = frame.size();
  require_three(frame);
  DependenceCache cache(source);
  auto skeleton = dep_spanning_tree(cache);
  Dag dag = empty_dag(frame);
  std::vector<std::string> warnings;
  if (skeleton.empty()) {
    warnings.emplace_back(kNoDependence);
    return {fit_valuations(dag, source), std::move(warnings)};
  }
  auto adj = adjacency(n, skeleton);

  struct Triple {
    std::size_t a, meeting, b;
    double score;
  };
  std::vector<Triple> colliders;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> collider_set;
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t i = 0; i < adj[z].size(); ++i)
      for (std::size_t j = i + 1; j < adj[z].size(); ++j) {
        auto x = adj[z][i], y = adj[z][j];
        double c = cache.criterion(x, y, z, options.alpha);
        bool collider = options.sign == SignConvention::NonNegativeMeansCollider ? c >= 0.0 : c < 0.0;
        if (!collider) continue;
        colliders.push_back({x, z, y, c});
        collider_set.insert({x, z, y});
      }
  std::stable_sort(colliders.begin(), colliders.end(),
                   [](const Triple& l, const Triple& r) { return std::abs(l.score) > std::abs(r.score); });

  // Orientation per skeleton edge: 0 undirected, otherwise the head node + 1.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> head;
  for (auto e : skeleton) head[e] = 0;
  auto key = [](std::size_t u, std::size_t v) { return std::pair<std::size_t, std::size_t>(std::minmax(u, v)); };
  auto points_to = [&](std::size_t from, std::size_t to) { return head[key(from, to)] == to + 1; };
  auto orient = [&](std::size_t from, std::size_t to) { head[key(from, to)] = to + 1; };
  auto undirected = [&](std::size_t u, std::size_t v) { return head[key(u, v)] == 0; };

  for (const auto& t : colliders) {
    if (points_to(t.meeting, t.a) || points_to(t.meeting, t.b)) {
      warnings.push_back("conflicting head-to-head meeting at " + frame.variable(t.meeting).name + " skipped");
      continue;
    }
    orient(t.a, t.meeting);
    orient(t.b, t.meeting);
  }

  // Propagate away from incoming arrows without creating undeclared colliders.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t z = 0; z < n; ++z)
      for (auto x : adj[z]) {
        if (!points_to(x, z)) continue;
        for (auto y : adj[z]) {
          if (y == x || !undirected(z, y)) continue;
          auto [lo, hi] = std::minmax(x, y);
          if (collider_set.count({lo, z, hi}))
            orient(y, z);
          else
            orient(z, y);
          changed = true;
        }
      }
  }

  // Whatever is left forms arrow-free components; orient each away from its first node.
  for (std::size_t r = 0; r < n; ++r) {
    bool has_undirected = std::any_of(adj[r].begin(), adj[r].end(), [&](std::size_t w) { return undirected(r, w); });
    if (!has_undirected) continue;
    std::deque<std::size_t> queue{r};
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v])
        if (undirected(v, w)) {
          orient(v, w);
          queue.push_back(w);
        }
    }
  }

  for (const auto& [edge, h] : head) {
    auto to = h - 1;
    auto from = edge.first == to ? edge.second : edge.first;
    dag.add_edge(from, to);
  }
  return {fit_valuations(dag, source), std::move(warnings)};
}

LearnResult learn_polytree(const Population& pop, const PolytreeOptions& options) {
  return learn_polytree(empirical_mass(pop), options);
}

StructureSummary summarize_structure(const Dag& dag) {
  StructureSummary s;
  for (auto [from, to] : dag.edges()) {
    auto a = dag.name(from), b = dag.name(to);
    if (b < a) std::swap(a, b);
    s.edges.emplace_back(a, b);
  }
  std::sort(s.edges.begin(), s.edges.end());
  for (std::size_t z = 0; z < dag.size(); ++z) {
    const auto& parents = dag.parents(z);
    for (std::size_t i = 0; i < parents.size(); ++i)
      for (std::size_t j = i + 1; j < parents.size(); ++j) {
        auto p = parents[i], q = parents[j];
        if (dag.has_edge(p, q) || dag.has_edge(q, p)) continue;
        auto a = dag.name(p), b = dag.name(q);
        if (b < a) std::swap(a, b);
        s.colliders.emplace_back(a, dag.name(z), b);
      }
  }
  std::sort(s.colliders.begin(), s.colliders.end());
  return s;
}

// ---------------------------------------------------------------------------

namespace {

class ModelBuilder {
 public:
  ModelBuilder(const ModelSpec& spec) : spec_(spec), rng_(spec.seed) {}

  BeliefNetwork build() {
    if (spec_.n_vars < 3) throw Error(Errc::InvalidArgument, "random models need at least 3 variables");
    if (spec_.domain_size < 2) throw Error(Errc::InvalidArgument, "domain size must be at least 2");
    if (spec_.focals_per_valuation < 1) throw Error(Errc::InvalidArgument, "need at least one focal per valuation");
    double configs = std::pow(static_cast<double>(spec_.domain_size), static_cast<double>(spec_.n_vars));
    if (configs > static_cast<double>(kConfigCap)) throw Error(Errc::CapExceeded, "model frame exceeds the cap");

    std::vector<Variable> vars;
    std::vector<std::string> domain;
    for (std::size_t v = 0; v < spec_.domain_size; ++v) domain.push_back(std::to_string(v));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec_.n_vars; ++i) {
      names.push_back("X" + std::to_string(i + 1));
      vars.push_back({names.back(), domain});
    }
    Dag dag(names);
    for (auto [from, to] : random_edges()) dag.add_edge(from, to);
    return valuate(vars, dag);
  }

  BeliefNetwork build_on(const Dag& dag) {
    if (spec_.domain_size < 2) throw Error(Errc::InvalidArgument, "domain size must be at least 2");
    if (spec_.focals_per_valuation < 1) throw Error(Errc::InvalidArgument, "need at least one focal per valuation");
    std::vector<std::string> domain;
    for (std::size_t v = 0; v < spec_.domain_size; ++v) domain.push_back(std::to_string(v));
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < dag.size(); ++i) vars.push_back({dag.name(i), domain});
    return valuate(vars, dag);
  }

 private:
  BeliefNetwork valuate(const std::vector<Variable>& vars, const Dag& dag) {
    for (std::size_t attempt = 0; attempt < kMaxModelAttempts; ++attempt) {
      BeliefNetwork net(vars, dag);
      for (std::size_t i = 0; i < dag.size(); ++i) net.set_valuation(i, valuation(net, i));
      if (faithful_pairs(net)) return net;
    }
    throw Error(Errc::InvalidArgument, "could not draw a model with every connected pair dependent");
  }

  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double weight() { return std::exponential_distribution<double>(1.0)(rng_) + 1e-3; }

  // Random attachment tree. Polytrees flip edges at random but keep every
  // head-to-head node a sink with at most kMaxPolytreeParents parents.
  std::vector<std::pair<std::size_t, std::size_t>> random_edges() {
    std::vector<std::size_t> order(spec_.n_vars);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> in_degree(spec_.n_vars, 0), out_degree(spec_.n_vars, 0);
    for (std::size_t k = 1; k < order.size(); ++k) {
      const std::size_t fresh = order[k];
      for (;;) {
        const std::size_t old = order[uniform(k)];
        bool down_ok = in_degree[old] < 2;
        bool up_ok = in_degree[old] < kMaxPolytreeParents && (in_degree[old] == 0 || out_degree[old] == 0);
        if (spec_.shape == ModelShape::Tree) up_ok = false;
        if (!down_ok && !up_ok) continue;
        bool up = up_ok && (!down_ok || uniform(2) == 1);
        auto [from, to] = up ? std::pair{fresh, old} : std::pair{old, fresh};
        ++out_degree[from];
        ++in_degree[to];
        edges.emplace_back(from, to);
        break;
      }
    }
    return edges;
  }

  std::vector<std::uint32_t> subset(bool proper = false) {
    const auto d = static_cast<std::uint32_t>(spec_.domain_size);
    for (;;) {
      std::vector<std::uint32_t> out;
      for (std::uint32_t v = 0; v < d; ++v)
        if (uniform(2) == 1) out.push_back(v);
      if (!out.empty() && (!proper || out.size() < d)) return out;
    }
  }

  // Every pair the dag leaves d-connected must be visibly dependent in the
  // joint, and adjacent pairs clearly so.
  static bool faithful_pairs(const BeliefNetwork& net) {
    MassFunction j;
    try {
      j = joint(net);
    } catch (const Error& e) {
      if (e.code() == Errc::TotalConflict) return false;
      throw;
    }
    const auto& dag = net.dag();
    for (std::size_t a = 0; a < dag.size(); ++a)
      for (std::size_t b = a + 1; b < dag.size(); ++b) {
        if (d_separated(dag, NodeSet{a}, NodeSet{b}, NodeSet{})) continue;
        VarNames first{dag.name(a)}, second{dag.name(b)};
        auto pair = marginalize(j, VarNames{first[0], second[0]});
        auto product = combine(marginalize(pair, first), marginalize(pair, second));
        double need = dag.has_edge(a, b) || dag.has_edge(b, a) ? kMinEdgeDependence : kMinPairDependence;
        if (delta(pair, product) < need) return false;
      }
    return true;
  }

  std::vector<std::pair<std::vector<std::uint32_t>, double>> distribution(std::size_t count) {
    std::vector<std::pair<std::vector<std::uint32_t>, double>> out;
    double total = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      out.emplace_back(subset(), weight());
      total += out.back().second;
    }
    for (auto& e : out) e.second /= total;
    return out;
  }

  MassFunction valuation(const BeliefNetwork& net, std::size_t node) {
    auto frame = net.node_frame(node);
    const auto& parents = net.dag().parents(node);
    std::vector<std::uint32_t> full(spec_.domain_size);
    std::iota(full.begin(), full.end(), 0u);

    // Per-parent factors: the full domain or one proper subset, evenly.
    std::vector<std::vector<std::pair<std::vector<std::uint32_t>, double>>> parent_factors;
    for (std::size_t k = 0; k < parents.size(); ++k) parent_factors.push_back({{full, 0.5}, {subset(true), 0.5}});

    FocalMap focals;
    std::vector<std::size_t> combo(parents.size(), 0);
    std::vector<std::uint32_t> baseline;
    for (;;) {
      double w = 1.0;
      ProductFactors factors(1 + parents.size());
      for (std::size_t k = 0; k < parents.size(); ++k) {
        w *= parent_factors[k][combo[k]].second;
        factors[k + 1] = parent_factors[k][combo[k]].first;
      }
      // Each parent combination favours one proper child subset, distinct
      // from the all-full combination's where possible.
      auto main = subset(true);
      if (baseline.empty()) {
        baseline = main;
      } else {
        for (int tries = 0; tries < 16 && main == baseline; ++tries) main = subset(true);
      }
      auto dist = distribution(spec_.focals_per_valuation - 1);
      double main_weight = dist.empty() ? 1.0 : std::uniform_real_distribution<double>(0.75, 0.95)(rng_);
      for (auto& e : dist) e.second *= 1.0 - main_weight;
      dist.emplace_back(main, main_weight);
      for (auto& [child, q] : dist) {
        factors[0] = child;
        focals[product_set(frame, factors)] += w * q;
      }
      std::size_t k = 0;
      while (k < combo.size() && ++combo[k] == 2) combo[k++] = 0;
      if (k == combo.size()) break;
    }
    return MassFunction::normalized(frame, std::move(focals));
  }

  ModelSpec spec_;
  std::mt19937_64 rng_;
};

}  // namespace

BeliefNetwork random_model(const ModelSpec& spec) { return ModelBuilder(spec).build(); }

BeliefNetwork random_network(const Dag& dag, const ModelSpec& spec) { return ModelBuilder(spec).build_on(dag); }

}  // namespace dsbn
