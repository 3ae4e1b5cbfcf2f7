#include "dsbn/ci.hpp"

#include <algorithm>
#include <deque>

namespace dsbn {

namespace {

std::pair<std::size_t, std::size_t> key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

// Visits r-subsets of `items` in lexicographic order until `visit` returns true.
template <class Visit>
bool for_each_subset(const NodeSet& items, std::size_t r, Visit&& visit) {
  if (r > items.size()) return false;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  NodeSet subset(r);
  for (;;) {
    for (std::size_t i = 0; i < r; ++i) subset[i] = items[idx[i]];
    if (visit(subset)) return true;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == items.size() - r + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

NodeSet without(NodeSet items, std::size_t a, std::size_t b) {
  items.erase(std::remove_if(items.begin(), items.end(), [&](std::size_t v) { return v == a || v == b; }),
              items.end());
  return items;
}

}  // namespace

Pipg::Pipg(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
  std::set<std::string> seen;
  for (const auto& n : nodes_) {
    if (n.empty()) throw Error(Errc::InvalidArgument, "node names must be nonempty");
    if (!seen.insert(n).second) throw Error(Errc::DuplicateName, "node '" + n + "'");
  }
}

std::size_t Pipg::require_index(std::string_view name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) throw Error(Errc::UnknownName, "node '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool Pipg::adjacent(std::size_t a, std::size_t b) const { return marks_.count(key(a, b)) > 0; }

void Pipg::add_edge(std::size_t a, std::size_t b, Mark at_a, Mark at_b) {
  if (a >= size() || b >= size() || a == b) throw Error(Errc::InvalidArgument, "invalid edge endpoints");
  if (adjacent(a, b)) throw Error(Errc::InvalidArgument, "edge " + nodes_[a] + " - " + nodes_[b] + " already present");
  marks_[key(a, b)] = a < b ? std::pair{at_a, at_b} : std::pair{at_b, at_a};
}

void Pipg::remove_edge(std::size_t a, std::size_t b) { marks_.erase(key(a, b)); }

Mark Pipg::mark(std::size_t at, std::size_t other) const {
  auto it = marks_.find(key(at, other));
  if (it == marks_.end()) throw Error(Errc::InvalidArgument, "no edge " + nodes_.at(at) + " - " + nodes_.at(other));
  return at < other ? it->second.first : it->second.second;
}

bool Pipg::can_orient(std::size_t at, std::size_t other, Mark m) const {
  auto current = mark(at, other);
  return current == m || current == Mark::Circle;
}

void Pipg::orient(std::size_t at, std::size_t other, Mark m) {
  if (!can_orient(at, other, m))
    throw Error(Errc::InvalidArgument, "mark at " + nodes_[at] + " on edge to " + nodes_[other] + " is already fixed");
  auto& marks = marks_[key(at, other)];
  (at < other ? marks.first : marks.second) = m;
}

NodeSet Pipg::neighbours(std::size_t a) const {
  NodeSet out;
  for (const auto& [edge, marks] : marks_) {
    if (edge.first == a) out.push_back(edge.second);
    if (edge.second == a) out.push_back(edge.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Pipg::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [edge, marks] : marks_) out.push_back(edge);
  return out;
}

bool Pipg::collider(std::size_t a, std::size_t b, std::size_t c) const {
  return adjacent(a, b) && adjacent(b, c) && mark(b, a) == Mark::Arrow && mark(b, c) == Mark::Arrow;
}

bool Pipg::definite_noncollider(std::size_t a, std::size_t b, std::size_t c) const {
  if (!adjacent(a, b) || !adjacent(b, c)) return false;
  return has_constraint(a, b, c) || mark(b, a) == Mark::Tail || mark(b, c) == Mark::Tail;
}

bool Pipg::directed(std::size_t from, std::size_t to) const {
  return adjacent(from, to) && mark(from, to) == Mark::Tail && mark(to, from) == Mark::Arrow;
}

bool Pipg::bidirected(std::size_t a, std::size_t b) const {
  return adjacent(a, b) && mark(a, b) == Mark::Arrow && mark(b, a) == Mark::Arrow;
}

void Pipg::add_constraint(std::size_t a, std::size_t b, std::size_t c) {
  if (!adjacent(a, b) || !adjacent(b, c))
    throw Error(Errc::InvalidArgument, "constraint at " + nodes_.at(b) + " needs both adjacencies");
  constraints_.insert({std::min(a, c), b, std::max(a, c)});
}

bool Pipg::has_constraint(std::size_t a, std::size_t b, std::size_t c) const {
  return constraints_.count({std::min(a, c), b, std::max(a, c)}) > 0;
}

void Pipg::set_sepset(std::size_t a, std::size_t b, NodeSet s) {
  std::sort(s.begin(), s.end());
  sepsets_[key(a, b)] = std::move(s);
}

const NodeSet* Pipg::sepset(std::size_t a, std::size_t b) const {
  auto it = sepsets_.find(key(a, b));
  return it == sepsets_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

bool rk_separated(const Source& source, const std::string& a, const std::string& b, std::span<const std::string> s,
                  double alpha) {
  if (a == b) throw Error(Errc::InvalidArgument, "two distinct variables are required");
  if (std::find(s.begin(), s.end(), a) != s.end() || std::find(s.begin(), s.end(), b) != s.end())
    throw Error(Errc::InvalidArgument, "the separating set must exclude both variables");
  // A variable whose evidence never varies carries no dependence to test.
  for (const auto& v : {a, b})
    if (marginalize(source.mass, VarNames{v}).focal_count() < 2) return true;
  std::vector<std::string> x{a}, y{b};
  return cond_indep(source, x, y, s, alpha).independent;
}

IndependenceOracle test_oracle(Source source, double alpha) {
  auto names = source.mass.frame().names();
  return [source = std::move(source), names, alpha](std::size_t a, std::size_t b, std::span<const std::size_t> s) {
    std::vector<std::string> given;
    for (auto v : s) given.push_back(names.at(v));
    if (!source.sample_size) return ci_statement_holds(source.mass, {names.at(a)}, {names.at(b)}, given);
    return rk_separated(source, names.at(a), names.at(b), given, alpha);
  };
}

IndependenceOracle dsep_oracle(Dag dag, std::vector<std::string> visible) {
  NodeSet index;
  for (const auto& n : visible) index.push_back(dag.require_index(n));
  return [dag = std::move(dag), index](std::size_t a, std::size_t b, std::span<const std::size_t> s) {
    NodeSet given;
    for (auto v : s) given.push_back(index.at(v));
    return d_separated(dag, NodeSet{index.at(a)}, NodeSet{index.at(b)}, given);
  };
}

Pipg frkci_skeleton(const std::vector<std::string>& nodes, const IndependenceOracle& independent, std::size_t k) {
  Pipg g(nodes);
  const std::size_t n = nodes.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) g.add_edge(a, b);

  auto try_separate = [&](std::size_t a, std::size_t b, const NodeSet& candidates, std::size_t size) {
    return for_each_subset(candidates, size, [&](const NodeSet& s) {
      if (!independent(a, b, s)) return false;
      g.remove_edge(a, b);
      g.set_sepset(a, b, s);
      return true;
    });
  };

  for (std::size_t j = 0; j <= k; ++j) {
    for (auto [a, b] : g.edges()) {
      if (!g.adjacent(a, b)) continue;
      if (try_separate(a, b, without(g.neighbours(a), a, b), j)) continue;
      if (j > 0) try_separate(a, b, without(g.neighbours(b), a, b), j);
    }
  }

  NodeSet all(n);
  for (std::size_t v = 0; v < n; ++v) all[v] = v;
  for (auto [a, b] : g.edges()) {
    auto others = without(all, a, b);
    for (std::size_t size = 1; size <= std::min(k, others.size()); ++size)
      if (try_separate(a, b, others, size)) break;
  }
  return g;
}

Pipg orient_initial(Pipg skeleton) {
  Pipg g(skeleton.names());
  for (auto [a, b] : skeleton.edges()) g.add_edge(a, b);
  for (const auto& [pair, s] : skeleton.sepsets()) g.set_sepset(pair.first, pair.second, s);

  for (std::size_t b = 0; b < g.size(); ++b) {
    auto adj = g.neighbours(b);
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        auto a = adj[i], c = adj[j];
        if (g.adjacent(a, c)) continue;
        const auto* s = g.sepset(a, c);
        if (!s) throw Error(Errc::InvalidArgument, "missing sepset for " + g.name(a) + ", " + g.name(c));
        if (std::binary_search(s->begin(), s->end(), b)) {
          g.add_constraint(a, b, c);
        } else {
          g.orient(b, a, Mark::Arrow);
          g.orient(b, c, Mark::Arrow);
        }
      }
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace {

// Arms of a discriminating path: simple paths m, v1, ..., end where every
// vertex strictly between m and end is adjacent to `far` (the other endpoint)
// and receives an arrowhead from its outer neighbour.
void collect_arms(const Pipg& g, std::size_t m, std::size_t end, std::size_t far, NodeSet& path,
                  std::vector<bool>& used, std::vector<NodeSet>& out) {
  auto last = path.back();
  if (last == end) {
    out.push_back(path);
    return;
  }
  if (path.size() > 1 && !g.adjacent(last, far)) return;
  for (auto next : g.neighbours(last)) {
    if (used[next] || next == far) continue;
    // The outer neighbour points into every vertex before m.
    if (path.size() > 1 && g.mark(last, next) != Mark::Arrow) continue;
    used[next] = true;
    path.push_back(next);
    collect_arms(g, m, end, far, path, used, out);
    path.pop_back();
    used[next] = false;
  }
}

bool arm_interior_ok(const Pipg& g, const NodeSet& u, std::size_t from, std::size_t to, std::size_t other_end) {
  for (std::size_t i = from; i < to; ++i) {
    auto v = u[i];
    bool is_collider = g.collider(u[i - 1], v, u[i + 1]);
    if (!is_collider && !g.definite_noncollider(u[i - 1], v, u[i + 1])) return false;
    // Colliders point into the far endpoint, non-colliders get an arrowhead from it.
    if (is_collider ? !g.directed(v, other_end) : g.mark(v, other_end) != Mark::Arrow) return false;
  }
  return true;
}

}  // namespace

std::vector<NodeSet> definite_discriminating_paths(const Pipg& g, std::size_t x, std::size_t y, std::size_t m) {
  if (x == y || x == m || y == m || x >= g.size() || y >= g.size() || m >= g.size())
    throw Error(Errc::InvalidArgument, "discriminating paths need three distinct nodes");
  if (g.adjacent(x, y)) return {};
  std::vector<NodeSet> to_x, to_y;
  {
    std::vector<bool> used(g.size(), false);
    used[m] = true;
    NodeSet path{m};
    collect_arms(g, m, x, y, path, used, to_x);
    collect_arms(g, m, y, x, path, used, to_y);
  }
  std::vector<NodeSet> out;
  for (const auto& left : to_x)
    for (const auto& right : to_y) {
      std::vector<bool> seen(g.size(), false);
      bool disjoint = true;
      for (auto v : left) seen[v] = true;
      for (std::size_t i = 1; i < right.size(); ++i) disjoint &= !seen[right[i]];
      if (!disjoint) continue;
      NodeSet u(left.rbegin(), left.rend());
      u.insert(u.end(), right.begin() + 1, right.end());
      const std::size_t at = left.size() - 1;
      if (!arm_interior_ok(g, u, 1, at, y) || !arm_interior_ok(g, u, at + 1, u.size() - 1, x)) continue;
      out.push_back(std::move(u));
    }
  std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::optional<NodeSet> find_definite_discriminating_path(const Pipg& g, std::size_t x, std::size_t y,
                                                         std::size_t m) {
  auto paths = definite_discriminating_paths(g, x, y, m);
  if (paths.empty()) return std::nullopt;
  return paths.front();
}

namespace {

bool rule_directed_path(Pipg& g) {
  const std::size_t n = g.size();
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> reach(n, false);
    std::deque<std::size_t> queue;
    for (auto c : g.neighbours(a))
      if (g.directed(a, c)) queue.push_back(c);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      if (reach[v]) continue;
      reach[v] = true;
      for (auto c : g.neighbours(v))
        if (g.directed(v, c)) queue.push_back(c);
    }
    for (auto b : g.neighbours(a))
      if (reach[b] && g.mark(b, a) == Mark::Circle) {
        g.orient(b, a, Mark::Arrow);
        return true;
      }
  }
  return false;
}

bool rule_constraint_collider(Pipg& g) {
  for (std::size_t b = 0; b < g.size(); ++b) {
    auto adj = g.neighbours(b);
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = i + 1; j < adj.size(); ++j) {
        auto a = adj[i], c = adj[j];
        if (g.adjacent(a, c) || !g.collider(a, b, c)) continue;
        for (auto d : adj) {
          if (d == a || d == c || g.mark(b, d) != Mark::Circle) continue;
          if (!g.has_constraint(a, d, c)) continue;
          g.orient(b, d, Mark::Arrow);
          return true;
        }
      }
  }
  return false;
}

bool rule_noncollider(Pipg& g) {
  for (const auto& [first, m, last] : g.constraints())
    for (auto [p, r] : {std::pair{first, last}, std::pair{last, first}}) {
      if (g.mark(m, p) != Mark::Arrow) continue;
      auto at_m = g.mark(m, r), at_r = g.mark(r, m);
      if (at_m == Mark::Arrow || at_r == Mark::Tail) continue;
      if (at_m != Mark::Circle && at_r != Mark::Circle) continue;
      g.orient(m, r, Mark::Tail);
      g.orient(r, m, Mark::Arrow);
      return true;
    }
  return false;
}

bool rule_discriminating(Pipg& g) {
  const std::size_t n = g.size();
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) {
        if (x == m || y == m || g.adjacent(x, y)) continue;
        const auto* s = g.sepset(x, y);
        if (!s) continue;
        bool separates = std::binary_search(s->begin(), s->end(), m);
        for (const auto& u : definite_discriminating_paths(g, x, y, m)) {
          auto at = static_cast<std::size_t>(std::find(u.begin(), u.end(), m) - u.begin());
          auto p = u[at - 1], r = u[at + 1];
          if (!g.adjacent(p, r)) continue;
          if (separates) {
            if (g.has_constraint(p, m, r)) continue;
            g.add_constraint(p, m, r);
            return true;
          }
          if (!g.can_orient(m, p, Mark::Arrow) || !g.can_orient(m, r, Mark::Arrow)) continue;
          if (g.mark(m, p) == Mark::Arrow && g.mark(m, r) == Mark::Arrow) continue;
          g.orient(m, p, Mark::Arrow);
          g.orient(m, r, Mark::Arrow);
          return true;
        }
      }
  return false;
}

}  // namespace

Pipg apply_d_rules(Pipg g) {
  while (rule_directed_path(g) || rule_constraint_collider(g) || rule_noncollider(g) || rule_discriminating(g)) {
  }
  return g;
}

Pipg finalize(Pipg g) {
  for (auto [a, b] : g.edges()) {
    if (g.mark(a, b) == Mark::Circle && g.mark(b, a) == Mark::Arrow) g.orient(a, b, Mark::Tail);
    if (g.mark(b, a) == Mark::Circle && g.mark(a, b) == Mark::Arrow) g.orient(b, a, Mark::Tail);
  }

  const std::size_t n = g.size();
  std::vector<bool> alive(n, true);
  auto removable = [&](std::size_t a) {
    for (const auto& [first, mid, last] : g.constraints())
      if (mid == a && alive[first] && alive[last]) return false;
    for (auto b : g.neighbours(a))
      if (alive[b] && g.mark(b, a) == Mark::Arrow && !g.bidirected(a, b)) return false;
    return true;
  };
  for (std::size_t left = n; left > 0; --left) {
    std::optional<std::size_t> pick;
    for (std::size_t a = 0; a < n && !pick; ++a)
      if (alive[a] && removable(a)) pick = a;
    if (!pick) {
      for (auto [a, b] : g.edges())
        if (alive[a] && alive[b] && g.mark(a, b) == Mark::Circle)
          throw Error(Errc::FinalizationStuck, "no legally removable node while undirected edges remain");
      break;
    }
    auto a = *pick;
    for (auto b : g.neighbours(a))
      if (alive[b] && g.mark(a, b) == Mark::Circle && g.mark(b, a) == Mark::Circle) {
        g.orient(a, b, Mark::Arrow);
        g.orient(b, a, Mark::Tail);
      }
    alive[a] = false;
  }
  return g;
}

HiddenInsertion insert_hidden(const Pipg& finalized) {
  HiddenInsertion out{Dag(finalized.names()), {}};
  for (auto [a, b] : finalized.edges()) {
    if (finalized.bidirected(a, b)) continue;
    std::size_t from = a, to = b;
    if (finalized.directed(b, a)) {
      std::swap(from, to);
    } else if (!finalized.directed(a, b)) {
      throw Error(Errc::InvalidArgument, "edge " + finalized.name(a) + " - " + finalized.name(b) + " is not finalized");
    }
    if (out.dag.would_create_cycle(from, to)) {
      out.warnings.push_back("edge " + finalized.name(from) + " -> " + finalized.name(to) +
                             " dropped: it would close a directed cycle");
      continue;
    }
    out.dag.add_edge(from, to);
  }
  for (auto [a, b] : finalized.edges()) {
    if (!finalized.bidirected(a, b)) continue;
    std::string name = "H_" + finalized.name(a) + finalized.name(b);
    for (int suffix = 2; out.dag.index_of(name); ++suffix)
      name = "H_" + finalized.name(a) + finalized.name(b) + "_" + std::to_string(suffix);
    auto h = out.dag.add_node(name, true);
    out.dag.add_edge(h, a);
    out.dag.add_edge(h, b);
  }
  return out;
}

CiResult frkci_structure(const std::vector<std::string>& nodes, const IndependenceOracle& independent, std::size_t k) {
  if (nodes.size() < 3) throw Error(Errc::InvalidArgument, "structure learning needs at least 3 variables");
  CiResult result;
  result.pipg = apply_d_rules(orient_initial(frkci_skeleton(nodes, independent, k)));
  try {
    result.finalized = finalize(result.pipg);
  } catch (const Error& e) {
    if (e.code() != Errc::FinalizationStuck) throw;
    result.warnings.emplace_back(e.what());
    return result;
  }
  auto inserted = insert_hidden(*result.finalized);
  result.structure = std::move(inserted.dag);
  for (auto& w : inserted.warnings) result.warnings.push_back(std::move(w));
  return result;
}

CiResult frkci(const Source& source, const CiOptions& options) {
  auto result = frkci_structure(source.mass.frame().names(), test_oracle(source, options.alpha), options.k);
  if (result.structure) result.network = fit_valuations(*result.structure, source.mass);
  return result;
}

CiResult frkci(const Population& pop, const CiOptions& options) {
  return frkci(Source::from_population(pop), options);
}

}  // namespace dsbn
