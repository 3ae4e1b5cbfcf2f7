#include "dsbn/indep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

namespace dsbn {

namespace {

constexpr double kExpectedFloor = 1e-12;
// Expected mass of the pooled off-support cell when no sample size is known.
constexpr double kExactPoolExpected = 1e-9;
constexpr double kWilsonZ = 1.959963984540054;

std::vector<std::string> joined(const Frame& frame, std::initializer_list<std::span<const std::string>> groups) {
  std::set<std::string> seen;
  for (auto group : groups)
    for (const auto& name : group) {
      frame.require_index(name);
      if (!seen.insert(name).second) throw Error(Errc::InvalidArgument, "variable '" + name + "' listed twice");
    }
  std::vector<std::string> out;
  for (const auto& v : frame.variables())
    if (seen.count(v.name)) out.push_back(v.name);
  return out;
}

TestResult finish(double statistic, int df, double alpha) {
  TestResult r;
  r.statistic = std::max(0.0, statistic);
  r.df = std::max(1, df);
  r.p_value = chi2_sf(r.statistic, r.df);
  r.independent = r.p_value > alpha;
  return r;
}

}  // namespace

Source Source::from_population(const Population& pop) {
  return {empirical_mass(pop), static_cast<double>(pop.active_count())};
}

double chi2_sf(double statistic, int df) {
  if (df < 1) throw Error(Errc::InvalidArgument, "degrees of freedom must be at least 1");
  if (std::isnan(statistic)) throw Error(Errc::InvalidArgument, "statistic is NaN");
  if (statistic <= 0.0) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

TestResult chi2_marginal(const Source& source, std::span<const std::string> first, std::span<const std::string> second,
                         double alpha) {
  if (first.empty() || second.empty()) throw Error(Errc::InvalidArgument, "both variable groups must be nonempty");
  const auto& frame = source.mass.frame();
  auto both = joined(frame, {first, second});
  auto joint = marginalize(source.mass, both);
  std::vector<std::string> a(first.begin(), first.end()), b(second.begin(), second.end());
  auto m1 = marginalize(joint, a);
  auto m2 = marginalize(joint, b);
  int df = static_cast<int>((m1.focal_count() - 1) * (m2.focal_count() - 1));
  if (df == 0) throw Error(Errc::InvalidArgument, "each marginal needs at least two focal sets");

  auto to1 = projection_table(joint.frame(), m1.frame());
  auto to2 = projection_table(joint.frame(), m2.frame());
  std::map<std::pair<ConfigSet, ConfigSet>, double> observed;
  for (const auto& [set, mass] : joint.focals()) {
    std::vector<std::uint32_t> p1, p2;
    for (auto c : set) {
      p1.push_back(to1[c]);
      p2.push_back(to2[c]);
    }
    observed[{ConfigSet::from_unsorted(std::move(p1)), ConfigSet::from_unsorted(std::move(p2))}] += mass;
  }
  double statistic = 0.0;
  for (const auto& [sa, ma] : m1.focals())
    for (const auto& [sb, mb] : m2.focals()) {
      double expected = ma * mb;
      auto it = observed.find({sa, sb});
      double o = it == observed.end() ? 0.0 : it->second;
      statistic += (o - expected) * (o - expected) / expected;
    }
  if (source.sample_size) statistic *= *source.sample_size;
  return finish(statistic, df, alpha);
}

Relevance variable_relevance(const Source& source, const std::string& variable) {
  std::vector<std::string> target{variable};
  auto marginal = marginalize(source.mass, target);
  Relevance r;
  r.score = std::clamp(1.0 - marginal.mass(ConfigSet::full(marginal.frame().config_count())), 0.0, 1.0);
  if (source.sample_size) {
    const double n = *source.sample_size;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (r.score + z2 / (2.0 * n)) / denom;
    const double half = kWilsonZ / denom * std::sqrt(r.score * (1.0 - r.score) / n + z2 / (4.0 * n * n));
    r.interval = std::pair{std::max(0.0, center - half), std::min(1.0, center + half)};
  }
  return r;
}

TestResult cond_indep(const Source& source, std::span<const std::string> x, std::span<const std::string> y,
                      std::span<const std::string> z, double alpha) {
  if (z.empty()) return chi2_marginal(source, x, y, alpha);
  if (x.empty() || y.empty()) throw Error(Errc::InvalidArgument, "both tested groups must be nonempty");
  const auto& frame = source.mass.frame();
  auto all = joined(frame, {x, y, z});
  auto xz = joined(frame, {x, z});
  auto yz = joined(frame, {y, z});
  std::vector<std::string> zs = joined(frame, {z});

  auto observed = marginalize(source.mass, all);
  auto mxz = marginalize(observed, xz);
  auto myz = marginalize(observed, yz);
  auto mz = marginalize(observed, zs);
  auto expected = combine(combine(anti_condition(mxz, zs), anti_condition(myz, zs)), mz);
  expected = vacuous_extend(expected, observed.frame());

  double statistic = 0.0;
  double pooled_observed = 0.0;
  for (const auto& [set, e] : expected.focals()) {
    double o = observed.mass(set);
    if (e <= kExpectedFloor) {
      pooled_observed += o;
      continue;
    }
    statistic += (o - e) * (o - e) / e;
  }
  for (const auto& [set, o] : observed.focals())
    if (expected.mass(set) == 0.0) pooled_observed += o;
  if (pooled_observed > 0.0) {
    double e = source.sample_size ? 1.0 / (2.0 * *source.sample_size) : kExactPoolExpected;
    statistic += (pooled_observed - e) * (pooled_observed - e) / e;
  }
  if (source.sample_size) statistic *= *source.sample_size;

  int df = static_cast<int>(observed.focal_count()) - static_cast<int>(mxz.focal_count()) -
           static_cast<int>(myz.focal_count()) + 1;
  return finish(statistic, df, alpha);
}

}  // namespace dsbn
