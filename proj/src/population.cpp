#include "dsbn/population.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "keyed_random.hpp"

namespace dsbn {

namespace {

void check_set(const Frame& frame, const ConfigSet& set, const char* what) {
  if (set.empty()) throw Error(Errc::EmptySet, std::string(what) + " is empty");
  if (set.members().back() >= frame.config_count())
    throw Error(Errc::InvalidArgument, std::string(what) + " references a configuration outside the frame");
}

void check_spec(const Frame& frame, const SelectionSpec& spec) {
  if (spec.labels.empty() || spec.labels.size() != spec.probs.size())
    throw Error(Errc::InvalidArgument, "selection spec needs one probability per label");
  double total = 0.0;
  for (std::size_t i = 0; i < spec.labels.size(); ++i) {
    check_set(frame, spec.labels[i], "selection label");
    if (!(spec.probs[i] > 0.0)) throw Error(Errc::InvalidArgument, "selection probabilities must be positive");
    total += spec.probs[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "selection probabilities must sum to 1");
}

template <typename Weights>
std::size_t pick(double u, const Weights& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

LabeledObject relabel(const LabeledObject& object, const ConfigSet& label) {
  if (!object.active()) return object;
  if (!measure(object, label, true)) return {object.value_set, ConfigSet{}};
  return {object.value_set, intersect(object.label, label)};
}

}  // namespace

std::size_t Population::active_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [](const LabeledObject& o) { return o.active(); }));
}

Population draw_population(const MassFunction& m, std::size_t n, std::uint64_t seed) {
  if (m.pseudo()) throw Error(Errc::InvalidMass, "cannot sample from a pseudo mass function");
  if (n == 0) throw Error(Errc::EmptyPopulation, "sample size must be positive");
  std::vector<const ConfigSet*> sets;
  std::vector<double> weights;
  for (const auto& [set, mass] : m.focals()) {
    sets.push_back(&set);
    weights.push_back(mass);
  }
  Population pop{m.frame(), {}};
  pop.objects.reserve(n);
  const auto full = ConfigSet::full(m.frame().config_count());
  for (std::size_t i = 0; i < n; ++i) {
    double u = detail::keyed_uniform(seed, detail::kDrawStream, i);
    pop.objects.push_back({*sets[pick(u, weights)], full});
  }
  return pop;
}

Population population_from_counts(const Frame& frame, const std::vector<std::pair<ConfigSet, std::size_t>>& counts) {
  Population pop{frame, {}};
  const auto full = ConfigSet::full(frame.config_count());
  for (const auto& [set, count] : counts) {
    check_set(frame, set, "value set");
    for (std::size_t i = 0; i < count; ++i) pop.objects.push_back({set, full});
  }
  return pop;
}

bool measure(const LabeledObject& object, const ConfigSet& set, bool modified) {
  if (!modified) return object.value_set.intersects(set);
  return object.value_set.intersects(intersect(set, object.label));
}

MassFunction lp_mass(const Frame& frame, const ConfigSet& label) {
  check_set(frame, label, "label");
  return MassFunction::categorical(frame, label);
}

MassFunction lp_mass(const Frame& frame, const SelectionSpec& spec) {
  check_spec(frame, spec);
  FocalMap focals;
  for (std::size_t i = 0; i < spec.labels.size(); ++i) focals[spec.labels[i]] += spec.probs[i];
  return MassFunction::from_focals(frame, focals);
}

Population relabel_simple(const Population& pop, const ConfigSet& label) {
  check_set(pop.frame, label, "label");
  Population out{pop.frame, {}};
  out.objects.reserve(pop.objects.size());
  for (const auto& object : pop.objects) out.objects.push_back(relabel(object, label));
  return out;
}

Population relabel_general(const Population& pop, const SelectionSpec& spec, std::uint64_t seed) {
  check_spec(pop.frame, spec);
  Population out{pop.frame, {}};
  out.objects.reserve(pop.objects.size());
  for (std::size_t i = 0; i < pop.objects.size(); ++i) {
    double u = detail::keyed_uniform(seed, detail::kRelabelStream, i);
    out.objects.push_back(relabel(pop.objects[i], spec.labels[pick(u, spec.probs)]));
  }
  return out;
}

MassFunction empirical_mass(const Population& pop) {
  std::map<ConfigSet, std::size_t> counts;
  std::size_t active = 0;
  for (const auto& object : pop.objects) {
    if (!object.active()) continue;
    ++counts[object.effective()];
    ++active;
  }
  if (active == 0) throw Error(Errc::EmptyPopulation, "no active objects");
  FocalMap focals;
  for (const auto& [set, count] : counts) focals.emplace(set, static_cast<double>(count) / static_cast<double>(active));
  return MassFunction::normalized(pop.frame, std::move(focals));
}

}  // namespace dsbn
