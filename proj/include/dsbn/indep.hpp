#pragma once

#include <optional>
#include <span>
#include <string>

#include "dsbn/evidence.hpp"
#include "dsbn/population.hpp"

namespace dsbn {

// Evidence an independence test runs on: a mass function, plus the number of
// objects it was estimated from when it comes from a population.
struct Source {
  MassFunction mass;
  std::optional<double> sample_size;

  static Source exact(MassFunction m) { return {std::move(m), std::nullopt}; }
  static Source from_population(const Population& pop);
};

struct TestResult {
  double statistic = 0.0;
  int df = 1;
  double p_value = 1.0;
  bool independent = true;
};

inline constexpr double kDefaultTestAlpha = 0.05;

double chi2_sf(double statistic, int df);

TestResult chi2_marginal(const Source& source, std::span<const std::string> first, std::span<const std::string> second,
                         double alpha = kDefaultTestAlpha);

struct Relevance {
  double score = 0.0;
  // Wilson 95% interval, present for population sources.
  std::optional<std::pair<double, double>> interval;
};

Relevance variable_relevance(const Source& source, const std::string& variable);

// Compares the observed X∪Y∪Z marginal with
// BEL↓XZ|Z ⊕ BEL↓YZ|Z ⊕ BEL↓Z. An empty Z falls back to chi2_marginal.
TestResult cond_indep(const Source& source, std::span<const std::string> x, std::span<const std::string> y,
                      std::span<const std::string> z, double alpha = kDefaultTestAlpha);

}  // namespace dsbn
