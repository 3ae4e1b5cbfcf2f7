#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsbn/frames.hpp"

namespace dsbn {

using FocalMap = std::map<ConfigSet, double>;

// Signed mass assignment over a product frame.
//
// Focal sets are kept in canonical ConfigSet order, masses with |m| < 1e-12 are
// dropped and Σ|m| = 1. A mass function with any negative entry is a
// pseudo-mass function; its commonalities are non-negative.
class MassFunction {
 public:
  // Vacuous mass over the empty frame.
  MassFunction();

  static MassFunction vacuous(const Frame& frame);
  static MassFunction categorical(const Frame& frame, ConfigSet set);

  // Checks the entries and throws InvalidMass when validate_mass rejects them.
  // Negative masses are accepted only with allow_pseudo.
  static MassFunction from_focals(const Frame& frame, const FocalMap& focals, bool allow_pseudo = false);

  // Prunes tiny entries and rescales to Σ|m| = 1. Used for results of the
  // calculus, where the pseudo property holds by construction.
  static MassFunction normalized(const Frame& frame, FocalMap focals);

  const Frame& frame() const noexcept { return frame_; }
  const FocalMap& focals() const noexcept { return focals_; }
  std::size_t focal_count() const noexcept { return focals_.size(); }
  bool pseudo() const noexcept { return pseudo_; }

  double mass(const ConfigSet& set) const;

 private:
  MassFunction(Frame frame, FocalMap focals, bool pseudo)
      : frame_(std::move(frame)), focals_(std::move(focals)), pseudo_(pseudo) {}

  Frame frame_;
  FocalMap focals_;
  bool pseudo_ = false;
};

struct ValidationReport {
  double sum_abs = 0.0;
  bool has_empty = false;
  std::size_t negatives = 0;
  double min_q = 0.0;
  bool valid = false;
  std::string message;
};

using FocalList = std::vector<std::pair<ConfigSet, double>>;

ValidationReport validate_mass(const Frame& frame, const FocalList& entries);
ValidationReport validate_mass(const MassFunction& m);

struct MeasureTriple {
  double bel = 0.0;
  double pl = 0.0;
  double q = 0.0;
};

double belief(const MassFunction& m, const ConfigSet& set);
double plausibility(const MassFunction& m, const ConfigSet& set);
double commonality(const MassFunction& m, const ConfigSet& set);
MeasureTriple measures(const MassFunction& m, const ConfigSet& set);

enum class SetFunction { Belief, Commonality };

// Largest frame accepted by the full-subset table routines.
inline constexpr std::uint32_t kTableConfigCap = 16;

// Values of Bel or Q on every subset, indexed by bitmask (bit i = config i).
std::vector<double> set_function_table(const MassFunction& m, SetFunction kind);

// Inverse of set_function_table. The table must hold 2^config_count entries.
MassFunction moebius_invert(const Frame& frame, std::span<const double> table, SetFunction kind);

struct Combination {
  MassFunction mass;
  double conflict = 0.0;
};

// Joint frame of two frames: a's variables, then b's extra ones.
Frame unify_frames(const Frame& a, const Frame& b);

Combination combine_with_conflict(const MassFunction& m1, const MassFunction& m2);
MassFunction combine(const MassFunction& m1, const MassFunction& m2);

// Pseudo-inverse of combine by commonality division.
MassFunction decombine(const MassFunction& m12, const MassFunction& m2);

MassFunction condition(const MassFunction& m, const ConfigSet& set);
MassFunction marginalize(const MassFunction& m, std::span<const std::string> target);

// Extends onto a frame spanning m's variables (possibly reordered).
MassFunction vacuous_extend(const MassFunction& m, const Frame& target);

MassFunction anti_condition(const MassFunction& m, std::span<const std::string> given);

bool is_vacuous(const MassFunction& m);

// Largest focal-wise absolute difference; frames must span the same variables.
double max_focal_difference(const MassFunction& a, const MassFunction& b);

std::string format_mass(const MassFunction& m);

}  // namespace dsbn
