#include "dsbn/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "detail.hpp"

namespace dsbn {

namespace {

constexpr double kPrune = 1e-12;
constexpr double kSumTol = 1e-9;
constexpr double kQTol = 1e-9;
constexpr std::uint32_t kFullQCheckCap = 12;

bool has_negative(const FocalMap& focals) {
  return std::any_of(focals.begin(), focals.end(), [](const auto& e) { return e.second < 0.0; });
}

}  // namespace

namespace detail {

std::vector<ConfigSet> intersection_closure(const std::vector<ConfigSet>& generators, std::uint32_t config_count) {
  std::set<ConfigSet> closed{ConfigSet::full(config_count)};
  for (const auto& g : generators) {
    if (closed.count(g)) continue;
    std::vector<ConfigSet> fresh;
    for (const auto& x : closed) {
      auto meet = intersect(g, x);
      if (!meet.empty() && !closed.count(meet)) fresh.push_back(std::move(meet));
    }
    closed.insert(fresh.begin(), fresh.end());
  }
  return {closed.begin(), closed.end()};
}

double commonality_of(const FocalMap& focals, const ConfigSet& set) {
  double q = 0.0;
  for (const auto& [focal, mass] : focals)
    if (focal.size() >= set.size() && set.subset_of(focal)) q += mass;
  return q;
}

FocalMap extend_focals(const MassFunction& m, const Frame& target) {
  if (m.frame() == target) return m.focals();
  auto table = projection_table(target, m.frame());
  FocalMap out;
  std::vector<char> member(m.frame().config_count());
  for (const auto& [focal, mass] : m.focals()) {
    std::fill(member.begin(), member.end(), 0);
    for (auto c : focal) member[c] = 1;
    std::vector<std::uint32_t> configs;
    configs.reserve(static_cast<std::size_t>(focal.size()) * (target.config_count() / m.frame().config_count()));
    for (std::uint32_t c = 0; c < target.config_count(); ++c)
      if (member[table[c]]) configs.push_back(c);
    out[ConfigSet::from_sorted(std::move(configs))] += mass;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

MassFunction::MassFunction() : MassFunction(vacuous(Frame())) {}

MassFunction MassFunction::vacuous(const Frame& frame) {
  return MassFunction(frame, FocalMap{{ConfigSet::full(frame.config_count()), 1.0}}, false);
}

MassFunction MassFunction::categorical(const Frame& frame, ConfigSet set) {
  if (set.empty()) throw Error(Errc::EmptySet, "categorical mass on the empty set");
  if (set.members().back() >= frame.config_count()) throw Error(Errc::InvalidArgument, "config index out of frame");
  return MassFunction(frame, FocalMap{{std::move(set), 1.0}}, false);
}

MassFunction MassFunction::from_focals(const Frame& frame, const FocalMap& focals, bool allow_pseudo) {
  FocalList entries(focals.begin(), focals.end());
  auto report = validate_mass(frame, entries);
  if (!report.valid) throw Error(Errc::InvalidMass, report.message);
  if (report.negatives > 0 && !allow_pseudo) throw Error(Errc::InvalidMass, "negative masses in a proper mass function");
  return normalized(frame, focals);
}

MassFunction MassFunction::normalized(const Frame& frame, FocalMap focals) {
  double total = 0.0;
  for (auto it = focals.begin(); it != focals.end();) {
    if (it->first.empty()) throw Error(Errc::InvalidMass, "mass on the empty set");
    if (std::abs(it->second) < kPrune) {
      it = focals.erase(it);
    } else {
      total += std::abs(it->second);
      ++it;
    }
  }
  if (focals.empty() || total < kPrune) throw Error(Errc::InvalidMass, "no mass left after pruning");
  if (std::abs(total - 1.0) > 1e-15)
    for (auto& [set, mass] : focals) mass /= total;
  bool pseudo = has_negative(focals);
  return MassFunction(frame, std::move(focals), pseudo);
}

double MassFunction::mass(const ConfigSet& set) const {
  auto it = focals_.find(set);
  return it == focals_.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------

ValidationReport validate_mass(const Frame& frame, const FocalList& entries) {
  ValidationReport report;
  FocalMap merged;
  for (const auto& [set, mass] : entries) {
    report.sum_abs += std::abs(mass);
    if (set.empty()) {
      if (mass != 0.0) report.has_empty = true;
      continue;
    }
    if (set.members().back() >= frame.config_count()) {
      report.message = "focal set references a configuration outside the frame";
      return report;
    }
    merged[set] += mass;
  }
  for (const auto& [set, mass] : merged)
    if (mass < 0.0) ++report.negatives;

  const auto full = ConfigSet::full(frame.config_count());
  if (report.negatives == 0) {
    // Q is antitone for non-negative masses, so its minimum sits at the frame.
    report.min_q = merged.count(full) ? merged[full] : 0.0;
  } else if (frame.config_count() <= kFullQCheckCap) {
    const std::uint32_t n = frame.config_count();
    std::vector<double> q(std::size_t{1} << n, 0.0);
    for (const auto& [set, mass] : merged) {
      std::uint32_t mask = 0;
      for (auto c : set) mask |= 1u << c;
      q[mask] += mass;
    }
    for (std::uint32_t bit = 0; bit < n; ++bit)
      for (std::uint32_t mask = 0; mask < q.size(); ++mask)
        if (!(mask & (1u << bit))) q[mask] += q[mask | (1u << bit)];
    report.min_q = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < q.size(); ++mask) report.min_q = std::min(report.min_q, q[mask]);
  } else {
    // Q(A) = Q(closure of A), so the intersection closure covers every set
    // contained in some focal; all other nonempty sets have Q = 0.
    std::vector<ConfigSet> generators;
    for (const auto& e : merged) generators.push_back(e.first);
    report.min_q = merged.count(full) ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& set : detail::intersection_closure(generators, frame.config_count()))
      report.min_q = std::min(report.min_q, detail::commonality_of(merged, set));
  }

  if (report.has_empty) {
    report.message = "mass assigned to the empty set";
  } else if (std::abs(report.sum_abs - 1.0) > kSumTol) {
    std::ostringstream os;
    os.precision(12);
    os << "sum of |m| is " << report.sum_abs << ", expected 1";
    report.message = os.str();
  } else if (report.negatives > 0 && report.min_q < -kQTol) {
    std::ostringstream os;
    os << "pseudo mass has negative commonality " << report.min_q;
    report.message = os.str();
  } else {
    report.valid = true;
  }
  return report;
}

ValidationReport validate_mass(const MassFunction& m) {
  return validate_mass(m.frame(), FocalList(m.focals().begin(), m.focals().end()));
}

// ---------------------------------------------------------------------------

double belief(const MassFunction& m, const ConfigSet& set) {
  double bel = 0.0;
  for (const auto& [focal, mass] : m.focals())
    if (focal.size() <= set.size() && focal.subset_of(set)) bel += mass;
  return bel;
}

double plausibility(const MassFunction& m, const ConfigSet& set) {
  auto complement = difference(ConfigSet::full(m.frame().config_count()), set);
  return 1.0 - belief(m, complement);
}

double commonality(const MassFunction& m, const ConfigSet& set) { return detail::commonality_of(m.focals(), set); }

MeasureTriple measures(const MassFunction& m, const ConfigSet& set) {
  if (!set.empty() && set.members().back() >= m.frame().config_count())
    throw Error(Errc::FrameMismatch, "set references a configuration outside the frame");
  return {belief(m, set), plausibility(m, set), commonality(m, set)};
}

// ---------------------------------------------------------------------------

std::vector<double> set_function_table(const MassFunction& m, SetFunction kind) {
  const std::uint32_t n = m.frame().config_count();
  if (n > kTableConfigCap) throw Error(Errc::CapExceeded, "full subset tables need at most 16 configurations");
  std::vector<double> table(std::size_t{1} << n, 0.0);
  for (const auto& [set, mass] : m.focals()) {
    std::uint32_t mask = 0;
    for (auto c : set) mask |= 1u << c;
    table[mask] += mass;
  }
  for (std::uint32_t bit = 0; bit < n; ++bit)
    for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
      if (kind == SetFunction::Belief && (mask & (1u << bit))) table[mask] += table[mask ^ (1u << bit)];
      if (kind == SetFunction::Commonality && !(mask & (1u << bit))) table[mask] += table[mask | (1u << bit)];
    }
  return table;
}

MassFunction moebius_invert(const Frame& frame, std::span<const double> table, SetFunction kind) {
  const std::uint32_t n = frame.config_count();
  if (n > kTableConfigCap) throw Error(Errc::CapExceeded, "full subset tables need at most 16 configurations");
  if (table.size() != (std::size_t{1} << n)) throw Error(Errc::InvalidArgument, "table incomplete");
  std::vector<double> m(table.begin(), table.end());
  for (std::uint32_t bit = 0; bit < n; ++bit)
    for (std::uint32_t mask = 0; mask < m.size(); ++mask) {
      if (kind == SetFunction::Belief && (mask & (1u << bit))) m[mask] -= m[mask ^ (1u << bit)];
      if (kind == SetFunction::Commonality && !(mask & (1u << bit))) m[mask] -= m[mask | (1u << bit)];
    }
  if (std::abs(m[0]) > kSumTol) throw Error(Errc::InvalidMass, "table implies mass on the empty set");
  FocalMap focals;
  for (std::uint32_t mask = 1; mask < m.size(); ++mask) {
    if (std::abs(m[mask]) < kPrune) continue;
    std::vector<std::uint32_t> members;
    for (std::uint32_t c = 0; c < n; ++c)
      if (mask & (1u << c)) members.push_back(c);
    focals.emplace(ConfigSet::from_sorted(std::move(members)), m[mask]);
  }
  return MassFunction::from_focals(frame, focals, true);
}

// ---------------------------------------------------------------------------

Frame unify_frames(const Frame& a, const Frame& b) {
  std::vector<Variable> vars(a.variables().begin(), a.variables().end());
  bool extra = false;
  for (const auto& v : b.variables()) {
    auto i = a.index_of(v.name);
    if (!i) {
      vars.push_back(v);
      extra = true;
    } else if (a.variable(*i).domain != v.domain) {
      throw Error(Errc::FrameMismatch, "variable '" + v.name + "' has different domains");
    }
  }
  return extra ? Frame(std::move(vars)) : a;
}

Combination combine_with_conflict(const MassFunction& m1, const MassFunction& m2) {
  Frame frame = unify_frames(m1.frame(), m2.frame());
  auto f1 = detail::extend_focals(m1, frame);
  auto f2 = detail::extend_focals(m2, frame);
  FocalMap out;
  double conflict = 0.0;
  for (const auto& [a, ma] : f1)
    for (const auto& [b, mb] : f2) {
      auto meet = intersect(a, b);
      if (meet.empty())
        conflict += ma * mb;
      else
        out[std::move(meet)] += ma * mb;
    }
  double total = 0.0;
  for (const auto& e : out) total += std::abs(e.second);
  if (total < kPrune) throw Error(Errc::TotalConflict, "the combined evidence is totally conflicting");
  return {MassFunction::normalized(frame, std::move(out)), conflict};
}

MassFunction combine(const MassFunction& m1, const MassFunction& m2) { return combine_with_conflict(m1, m2).mass; }

MassFunction decombine(const MassFunction& m12, const MassFunction& m2) {
  Frame frame = unify_frames(m12.frame(), m2.frame());
  auto f12 = detail::extend_focals(m12, frame);
  auto f2 = detail::extend_focals(m2, frame);

  std::vector<ConfigSet> generators;
  for (const auto& e : f12) generators.push_back(e.first);
  for (const auto& e : f2) generators.push_back(e.first);
  auto lattice = detail::intersection_closure(generators, frame.config_count());

  // The Q ratio is constant on closure classes, so its Möbius inverse lives on
  // the lattice; solve from the largest sets down.
  std::stable_sort(lattice.begin(), lattice.end(),
                   [](const ConfigSet& a, const ConfigSet& b) { return a.size() > b.size(); });
  std::vector<double> masses(lattice.size(), 0.0);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& set = lattice[i];
    double q12 = detail::commonality_of(f12, set);
    double ratio = 0.0;
    if (std::abs(q12) > kPrune) {
      double q2 = detail::commonality_of(f2, set);
      if (q2 <= kPrune)
        throw Error(Errc::ZeroCommonality, "divisor has zero commonality where the dividend does not");
      ratio = q12 / q2;
    }
    double m = ratio;
    for (std::size_t j = 0; j < i; ++j)
      if (lattice[j].size() > set.size() && set.subset_of(lattice[j])) m -= masses[j];
    masses[i] = m;
  }
  FocalMap out;
  for (std::size_t i = 0; i < lattice.size(); ++i)
    if (std::abs(masses[i]) >= kPrune) out.emplace(std::move(lattice[i]), masses[i]);
  if (out.empty()) throw Error(Errc::ZeroCommonality, "decombination left no mass");
  return MassFunction::normalized(frame, std::move(out));
}

MassFunction condition(const MassFunction& m, const ConfigSet& set) {
  if (set.empty()) throw Error(Errc::EmptySet, "cannot condition on the empty set");
  if (plausibility(m, set) <= kPrune) throw Error(Errc::TotalConflict, "conditioning event has zero plausibility");
  return combine(m, MassFunction::categorical(m.frame(), set));
}

MassFunction marginalize(const MassFunction& m, std::span<const std::string> target) {
  Frame sub = m.frame().sub_frame(target);
  if (sub == m.frame()) return m;
  auto table = projection_table(m.frame(), sub);
  FocalMap out;
  for (const auto& [focal, mass] : m.focals()) {
    std::vector<std::uint32_t> projected;
    projected.reserve(focal.size());
    for (auto c : focal) projected.push_back(table[c]);
    out[ConfigSet::from_unsorted(std::move(projected))] += mass;
  }
  return MassFunction::normalized(sub, std::move(out));
}

MassFunction vacuous_extend(const MassFunction& m, const Frame& target) {
  for (const auto& v : m.frame().variables()) {
    auto i = target.index_of(v.name);
    if (!i || target.variable(*i).domain != v.domain)
      throw Error(Errc::FrameMismatch, "variable '" + v.name + "' missing from the target frame");
  }
  if (m.frame() == target) return m;
  return MassFunction::normalized(target, detail::extend_focals(m, target));
}

MassFunction anti_condition(const MassFunction& m, std::span<const std::string> given) {
  if (given.empty()) throw Error(Errc::InvalidArgument, "anti-conditioning needs a nonempty variable set");
  auto marginal = marginalize(m, given);
  return decombine(m, vacuous_extend(marginal, m.frame()));
}

bool is_vacuous(const MassFunction& m) {
  if (m.focal_count() != 1) return false;
  const auto& [set, mass] = *m.focals().begin();
  return set.size() == m.frame().config_count() && std::abs(mass - 1.0) <= kSumTol;
}

double max_focal_difference(const MassFunction& a, const MassFunction& b) {
  if (!a.frame().same_variables(b.frame())) throw Error(Errc::FrameMismatch, "frames span different variables");
  auto aligned = vacuous_extend(b, a.frame());
  double worst = 0.0;
  for (const auto& [set, mass] : a.focals()) worst = std::max(worst, std::abs(mass - aligned.mass(set)));
  for (const auto& [set, mass] : aligned.focals())
    if (!a.focals().count(set)) worst = std::max(worst, std::abs(mass));
  return worst;
}

std::string format_mass(const MassFunction& m) {
  std::ostringstream os;
  os.precision(10);
  for (const auto& [set, mass] : m.focals()) {
    os << mass << "\t{";
    bool first = true;
    for (auto c : set) {
      if (!first) os << ",";
      first = false;
      os << format_config(m.frame(), c);
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace dsbn
