#include "dsbn/network.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>

namespace dsbn {

Dag::Dag(const std::vector<std::string>& names, const std::vector<bool>& hidden) {
  for (std::size_t i = 0; i < names.size(); ++i) add_node(names[i], i < hidden.size() && hidden[i]);
}

std::size_t Dag::add_node(const std::string& name, bool hidden) {
  if (name.empty()) throw Error(Errc::InvalidArgument, "node names must be nonempty");
  if (index_of(name)) throw Error(Errc::DuplicateName, "node '" + name + "'");
  names_.push_back(name);
  hidden_.push_back(hidden);
  parents_.emplace_back();
  return names_.size() - 1;
}

std::optional<std::size_t> Dag::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Dag::require_index(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw Error(Errc::UnknownName, "node '" + std::string(name) + "'");
  return *i;
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  const auto& p = parents_.at(to);
  return std::binary_search(p.begin(), p.end(), from);
}

bool Dag::would_create_cycle(std::size_t from, std::size_t to) const {
  if (from == to) return true;
  // A cycle appears iff `from` is already reachable from `to`.
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{from};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (auto p : parents_[v]) stack.push_back(p);
  }
  return false;
}

void Dag::add_edge(std::size_t from, std::size_t to) {
  if (from >= size() || to >= size()) throw Error(Errc::UnknownName, "edge endpoint out of range");
  if (has_edge(from, to)) return;
  if (would_create_cycle(from, to))
    throw Error(Errc::NotAcyclic, "edge " + names_[from] + " -> " + names_[to] + " closes a cycle");
  auto& p = parents_[to];
  p.insert(std::upper_bound(p.begin(), p.end(), from), from);
}

void Dag::add_edge(const std::string& from, const std::string& to) { add_edge(require_index(from), require_index(to)); }

NodeSet Dag::children(std::size_t i) const {
  NodeSet out;
  for (std::size_t c = 0; c < size(); ++c)
    if (has_edge(i, c)) out.push_back(c);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Dag::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t c = 0; c < size(); ++c)
    for (auto p : parents_[c]) out.emplace_back(p, c);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : parents_) n += p.size();
  return n;
}

NodeSet Dag::topological_order() const {
  std::vector<std::size_t> pending(size());
  for (std::size_t i = 0; i < size(); ++i) pending[i] = parents_[i].size();
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < size(); ++i)
    if (pending[i] == 0) ready.insert(i);
  NodeSet order;
  while (!ready.empty()) {
    auto v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (auto c : children(v))
      if (--pending[c] == 0) ready.insert(c);
  }
  return order;
}

// ---------------------------------------------------------------------------

BeliefNetwork::BeliefNetwork(std::vector<Variable> variables, Dag dag)
    : variables_(std::move(variables)), dag_(std::move(dag)) {
  if (variables_.size() != dag_.size()) throw Error(Errc::InvalidArgument, "one variable per node is required");
  for (std::size_t i = 0; i < dag_.size(); ++i) {
    if (variables_[i].name != dag_.name(i)) throw Error(Errc::InvalidArgument, "variables must follow node order");
    valuations_.push_back(MassFunction::vacuous(node_frame(i)));
  }
}

BeliefNetwork::BeliefNetwork(std::vector<Variable> variables, Dag dag, std::vector<MassFunction> valuations)
    : BeliefNetwork(std::move(variables), std::move(dag)) {
  if (valuations.size() != dag_.size()) throw Error(Errc::InvalidArgument, "one valuation per node is required");
  for (std::size_t i = 0; i < valuations.size(); ++i) set_valuation(i, valuations[i]);
}

Frame BeliefNetwork::node_frame(std::size_t i) const {
  std::vector<Variable> vars{variables_.at(i)};
  for (auto p : dag_.parents(i)) vars.push_back(variables_[p]);
  return Frame(std::move(vars));
}

Frame BeliefNetwork::full_frame() const { return Frame(variables_); }

VarNames BeliefNetwork::visible_names() const {
  VarNames out;
  for (std::size_t i = 0; i < dag_.size(); ++i)
    if (!dag_.hidden(i)) out.push_back(dag_.name(i));
  return out;
}

void BeliefNetwork::set_valuation(std::size_t i, const MassFunction& m) {
  auto frame = node_frame(i);
  if (!m.frame().same_variables(frame))
    throw Error(Errc::FrameMismatch, "valuation of '" + dag_.name(i) + "' must span the node and its parents");
  valuations_.at(i) = vacuous_extend(m, frame);
}

MassFunction joint(const BeliefNetwork& net) {
  const auto& dag = net.dag();
  if (dag.size() == 0) throw Error(Errc::InvalidArgument, "empty network");
  auto order = dag.topological_order();
  MassFunction acc = net.valuation(order.front());
  for (std::size_t k = 1; k < order.size(); ++k) acc = combine(acc, net.valuation(order[k]));
  return vacuous_extend(acc, net.full_frame());
}

// ---------------------------------------------------------------------------

bool d_separated(const Dag& dag, const NodeSet& j, const NodeSet& k, const NodeSet& l) {
  const std::size_t n = dag.size();
  std::vector<bool> in_l(n, false), in_k(n, false), in_j(n, false);
  for (auto v : l) in_l.at(v) = true;
  for (auto v : k) in_k.at(v) = true;
  for (auto v : j) in_j.at(v) = true;
  for (std::size_t v = 0; v < n; ++v)
    if ((in_l[v] && (in_k[v] || in_j[v])) || (in_j[v] && in_k[v]))
      throw Error(Errc::InvalidArgument, "node sets must be disjoint");
  if (j.empty() || k.empty()) return true;

  // Ancestors of L (including L) let a collider pass the ball back up.
  std::vector<bool> anc(n, false);
  std::vector<std::size_t> stack(l.begin(), l.end());
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (anc[v]) continue;
    anc[v] = true;
    for (auto p : dag.parents(v)) stack.push_back(p);
  }
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) children[v] = dag.children(v);

  // State: node plus whether it was entered from a child (upward move).
  std::vector<std::array<bool, 2>> visited(n, {false, false});
  std::deque<std::pair<std::size_t, bool>> queue;
  for (auto v : j) queue.emplace_back(v, true);
  while (!queue.empty()) {
    auto [v, up] = queue.front();
    queue.pop_front();
    if (visited[v][up]) continue;
    visited[v][up] = true;
    if (!in_l[v] && in_k[v]) return false;
    if (up) {
      if (in_l[v]) continue;
      for (auto p : dag.parents(v)) queue.emplace_back(p, true);
      for (auto c : children[v]) queue.emplace_back(c, false);
    } else {
      if (!in_l[v])
        for (auto c : children[v]) queue.emplace_back(c, false);
      if (anc[v])
        for (auto p : dag.parents(v)) queue.emplace_back(p, true);
    }
  }
  return true;
}

bool d_separated(const Dag& dag, const VarNames& j, const VarNames& k, const VarNames& l) {
  auto idx = [&](const VarNames& names) {
    NodeSet out;
    for (const auto& n : names) out.push_back(dag.require_index(n));
    return out;
  };
  return d_separated(dag, idx(j), idx(k), idx(l));
}

bool ci_statement_holds(const MassFunction& m, const VarNames& j, const VarNames& k, const VarNames& l, double tol) {
  std::set<std::string> seen;
  for (const auto* group : {&j, &k, &l})
    for (const auto& name : *group) {
      m.frame().require_index(name);
      if (!seen.insert(name).second) throw Error(Errc::InvalidArgument, "variable sets must be disjoint");
    }
  if (j.empty() || k.empty()) return true;
  auto concat = [](const VarNames& a, const VarNames& b) {
    VarNames out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };
  auto all = concat(concat(j, k), l);
  auto observed = marginalize(m, all);
  MassFunction factored;
  if (l.empty()) {
    factored = combine(marginalize(observed, j), marginalize(observed, k));
  } else {
    auto jl = marginalize(observed, concat(j, l));
    auto kl = marginalize(observed, concat(k, l));
    factored = combine(combine(anti_condition(jl, l), anti_condition(kl, l)), marginalize(observed, l));
  }
  return max_focal_difference(observed, factored) <= tol;
}

// ---------------------------------------------------------------------------

std::vector<std::string> hidden_domain() { return {"h0", "h1"}; }

BeliefNetwork fit_valuations(const Dag& structure, const MassFunction& source) {
  const auto& frame = source.frame();
  std::vector<Variable> variables;
  for (std::size_t i = 0; i < structure.size(); ++i) {
    if (structure.hidden(i)) {
      variables.push_back({structure.name(i), hidden_domain()});
    } else {
      variables.push_back(frame.variable(frame.require_index(structure.name(i))));
    }
  }
  BeliefNetwork net(std::move(variables), structure);
  for (std::size_t i = 0; i < structure.size(); ++i) {
    if (structure.hidden(i)) continue;
    const auto& parents = structure.parents(i);
    if (std::any_of(parents.begin(), parents.end(), [&](std::size_t p) { return structure.hidden(p); })) continue;
    VarNames names{structure.name(i)};
    VarNames given;
    for (auto p : parents) given.push_back(structure.name(p));
    names.insert(names.end(), given.begin(), given.end());
    try {
      auto marginal = marginalize(source, names);
      net.set_valuation(i, given.empty() ? marginal : anti_condition(marginal, given));
    } catch (const Error& e) {
      throw Error(e.code(), std::string("fitting node '") + structure.name(i) + "': " + e.what());
    }
  }
  return net;
}

BeliefNetwork fit_valuations(const Dag& structure, const Population& pop) {
  return fit_valuations(structure, empirical_mass(pop));
}

Population sample_network(const BeliefNetwork& net, std::size_t n, std::uint64_t seed) {
  auto m = joint(net);
  auto visible = net.visible_names();
  if (visible.empty()) throw Error(Errc::InvalidArgument, "network has no visible nodes");
  if (visible.size() != net.dag().size()) m = marginalize(m, visible);
  return draw_population(m, n, seed);
}

}  // namespace dsbn
