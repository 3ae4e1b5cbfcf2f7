#include "dsbn/hyper.hpp"

#include <algorithm>
#include <map>

#include "dsbn/error.hpp"

namespace dsbn {

namespace {

bool subset_of(const Hyperedge& a, const Hyperedge& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Hyperedge intersect(const Hyperedge& a, const Hyperedge& b) {
  Hyperedge out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Hyperedge difference(const Hyperedge& a, const Hyperedge& b) {
  Hyperedge out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string describe(const Hyperedge& e) {
  std::string s = "{";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + e[i];
  return s + "}";
}

}  // namespace

Hypergraph::Hypergraph(std::vector<Hyperedge> hyperedges, std::vector<std::string> extra_vertices) {
  for (auto& e : hyperedges) {
    if (e.empty()) throw Error(Errc::EmptySet, "hyperedges must be nonempty");
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    vertices_.insert(vertices_.end(), e.begin(), e.end());
  }
  std::sort(hyperedges.begin(), hyperedges.end());
  hyperedges.erase(std::unique(hyperedges.begin(), hyperedges.end()), hyperedges.end());
  hyperedges_ = std::move(hyperedges);
  vertices_.insert(vertices_.end(), extra_vertices.begin(), extra_vertices.end());
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

Hypergraph reduce_hypergraph(const Hypergraph& h) {
  const auto& edges = h.hyperedges();
  std::vector<Hyperedge> kept;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < edges.size() && !absorbed; ++j)
      absorbed = j != i && edges[i].size() < edges[j].size() && subset_of(edges[i], edges[j]);
    if (!absorbed) kept.push_back(edges[i]);
  }
  return Hypergraph(std::move(kept), h.vertices());
}

bool is_twig(const std::vector<Hyperedge>& edges, std::size_t t, std::size_t b) {
  if (t == b || t >= edges.size() || b >= edges.size()) return false;
  if (intersect(edges[t], edges[b]).empty()) return false;
  for (const auto& v : edges[t]) {
    if (std::binary_search(edges[b].begin(), edges[b].end(), v)) continue;
    for (std::size_t h = 0; h < edges.size(); ++h)
      if (h != t && std::binary_search(edges[h].begin(), edges[h].end(), v)) return false;
  }
  return true;
}

bool is_construction_sequence(const HypertreeSeq& seq) {
  if (seq.hyperedges.empty() || seq.branch.size() != seq.hyperedges.size() || seq.branch[0] != 0) return false;
  for (const auto& e : seq.hyperedges)
    if (e.empty() || !std::is_sorted(e.begin(), e.end()) || std::adjacent_find(e.begin(), e.end()) != e.end())
      return false;
  for (std::size_t k = 1; k < seq.hyperedges.size(); ++k) {
    if (seq.branch[k] >= k) return false;
    std::vector<Hyperedge> prefix(seq.hyperedges.begin(), seq.hyperedges.begin() + static_cast<std::ptrdiff_t>(k + 1));
    if (!is_twig(prefix, k, seq.branch[k])) return false;
  }
  return true;
}

std::optional<HypertreeSeq> construction_sequence(const Hypergraph& h) {
  std::vector<Hyperedge> remaining = h.hyperedges();
  if (remaining.empty()) return std::nullopt;
  std::vector<Hyperedge> removed;
  std::vector<Hyperedge> branches;
  while (remaining.size() > 1) {
    bool found = false;
    for (std::size_t t = remaining.size(); t-- > 0 && !found;)
      for (std::size_t b = 0; b < remaining.size(); ++b)
        if (is_twig(remaining, t, b)) {
          removed.push_back(remaining[t]);
          branches.push_back(remaining[b]);
          remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(t));
          found = true;
          break;
        }
    if (!found) return std::nullopt;
  }
  HypertreeSeq seq;
  seq.hyperedges.push_back(remaining.front());
  seq.branch.push_back(0);
  for (std::size_t k = removed.size(); k-- > 0;) {
    auto at = std::find(seq.hyperedges.begin(), seq.hyperedges.end(), branches[k]);
    seq.branch.push_back(static_cast<std::size_t>(at - seq.hyperedges.begin()));
    seq.hyperedges.push_back(removed[k]);
  }
  return seq;
}

Hypergraph induced_hypergraph(const Dag& dag) {
  std::vector<Hyperedge> edges;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    Hyperedge e{dag.name(i)};
    for (auto p : dag.parents(i)) e.push_back(dag.name(p));
    edges.push_back(std::move(e));
  }
  return reduce_hypergraph(Hypergraph(std::move(edges), dag.names()));
}

Hypergraph induced_hypergraph(const BeliefNetwork& net) { return induced_hypergraph(net.dag()); }

BeliefNetwork network_from_hypertree(const HypertreeSeq& seq, const std::vector<MassFunction>& valuations) {
  if (!is_construction_sequence(seq)) throw Error(Errc::InvalidArgument, "not a hypertree construction sequence");
  const std::size_t n = seq.hyperedges.size();
  if (valuations.size() != n) throw Error(Errc::InvalidArgument, "need one valuation per hyperedge");

  std::map<std::string, Variable> variables;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& frame = valuations[k].frame();
    auto names = frame.names();
    std::sort(names.begin(), names.end());
    if (names != seq.hyperedges[k])
      throw Error(Errc::FrameMismatch, "valuation " + std::to_string(k) + " does not span " + describe(seq.hyperedges[k]));
    for (const auto& v : frame.variables()) {
      auto [it, fresh] = variables.emplace(v.name, v);
      if (!fresh && it->second.domain != v.domain)
        throw Error(Errc::FrameMismatch, "variable '" + v.name + "' has conflicting domains");
    }
  }

  std::vector<std::string> names;
  std::vector<Variable> vars;
  for (const auto& [name, var] : variables) {
    names.push_back(name);
    vars.push_back(var);
  }
  Dag dag(names);
  // New vertices of each hyperedge and the vertices shared with its branch.
  std::vector<Hyperedge> fresh(n), shared(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) shared[k] = intersect(seq.hyperedges[k], seq.hyperedges[seq.branch[k]]);
    fresh[k] = difference(seq.hyperedges[k], shared[k]);
    for (std::size_t a = 0; a < fresh[k].size(); ++a) {
      for (const auto& s : shared[k]) dag.add_edge(s, fresh[k][a]);
      for (std::size_t b = a + 1; b < fresh[k].size(); ++b) dag.add_edge(fresh[k][a], fresh[k][b]);
    }
  }

  // Backward sweep: the last hyperedge collects the marginals of the others on
  // its vertices, keeps the part conditional on its branch and pushes the rest
  // onto the branch.
  std::vector<MassFunction> current = valuations;
  std::vector<MassFunction> collected(n);
  for (std::size_t k = n; k-- > 0;) {
    try {
      MassFunction gathered = current[k];
      for (std::size_t j = 0; j < k; ++j) {
        auto common = intersect(seq.hyperedges[j], seq.hyperedges[k]);
        if (common.empty()) continue;
        auto marginal = marginalize(current[j], common);
        gathered = combine(gathered, marginal);
        current[j] = decombine(current[j], vacuous_extend(marginal, current[j].frame()));
      }
      collected[k] = gathered;
      if (k > 0) {
        auto& target = current[seq.branch[k]];
        target = combine(target, marginalize(gathered, shared[k]));
      }
    } catch (const Error& e) {
      throw Error(e.code(), "valuation transfer failed at hyperedge " + describe(seq.hyperedges[k]) + ": " + e.what());
    }
  }

  BeliefNetwork net(vars, dag);
  for (std::size_t k = 0; k < n; ++k) {
    Hyperedge scope = shared[k];
    for (const auto& x : fresh[k]) {
      Hyperedge below = scope;
      scope.push_back(x);
      std::sort(scope.begin(), scope.end());
      auto upper = marginalize(collected[k], scope);
      auto factor = below.empty() ? upper : decombine(upper, vacuous_extend(marginalize(collected[k], below), upper.frame()));
      net.set_valuation(dag.require_index(x), factor);
    }
  }
  return net;
}

}  // namespace dsbn
