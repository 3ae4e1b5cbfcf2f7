#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dsbn/evidence.hpp"

namespace dsbn {

// An object's true set value together with its current label. An empty label
// marks an object discarded by some labeling process.
struct LabeledObject {
  ConfigSet value_set;
  ConfigSet label;

  bool active() const noexcept { return !label.empty(); }
  ConfigSet effective() const { return intersect(value_set, label); }
};

struct Population {
  Frame frame;
  std::vector<LabeledObject> objects;

  std::size_t active_count() const noexcept;
};

// Probabilistic choice of a label L^i with probability probs[i].
struct SelectionSpec {
  std::vector<ConfigSet> labels;
  std::vector<double> probs;
};

// Samples n objects whose value sets follow m; every label starts as Ξ.
Population draw_population(const MassFunction& m, std::size_t n, std::uint64_t seed);

// Unlabeled population holding each set the given number of times.
Population population_from_counts(const Frame& frame, const std::vector<std::pair<ConfigSet, std::size_t>>& counts);

// M(ω, A) or, with modified, M_l(ω, A) = M(ω, A ∩ l(ω)).
bool measure(const LabeledObject& object, const ConfigSet& set, bool modified);

MassFunction lp_mass(const Frame& frame, const ConfigSet& label);
MassFunction lp_mass(const Frame& frame, const SelectionSpec& spec);

Population relabel_simple(const Population& pop, const ConfigSet& label);

// Each object draws its own label from spec; reproducible for a given seed
// regardless of processing order.
Population relabel_general(const Population& pop, const SelectionSpec& spec, std::uint64_t seed);

// Relative frequencies of the effective sets value_set ∩ label over active objects.
MassFunction empirical_mass(const Population& pop);

}  // namespace dsbn
