#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsbn/error.hpp"

namespace dsbn {

// Largest number of configurations a product frame may span.
inline constexpr std::uint64_t kConfigCap = std::uint64_t{1} << 20;

using VarNames = std::vector<std::string>;

struct Variable {
  std::string name;
  std::vector<std::string> domain;

  bool operator==(const Variable&) const = default;
};

// Product frame of discernment over an ordered list of discrete variables.
//
// Configurations are indexed in mixed radix with the first declared variable
// most significant, so for [X1:{a,b}, X2:{x,y}] the index of (a,x) is 0 and the
// index of (b,y) is 3. Frames are immutable and cheap to copy.
class Frame {
 public:
  // The empty product: no variables, one (empty) configuration.
  Frame();
  explicit Frame(std::vector<Variable> variables);

  std::size_t size() const noexcept;
  std::uint32_t config_count() const noexcept;

  const Variable& variable(std::size_t i) const;
  std::span<const Variable> variables() const noexcept;
  VarNames names() const;

  std::optional<std::size_t> index_of(std::string_view name) const noexcept;
  std::size_t require_index(std::string_view name) const;
  bool contains(std::string_view name) const noexcept { return index_of(name).has_value(); }

  std::uint32_t radix(std::size_t i) const;
  std::uint32_t stride(std::size_t i) const;

  std::uint32_t encode(std::span<const std::uint32_t> values) const;
  std::vector<std::uint32_t> decode(std::uint32_t config) const;
  std::uint32_t digit(std::uint32_t config, std::size_t var) const;

  // Sub-frame over `names`, keeping this frame's variable order.
  Frame sub_frame(std::span<const std::string> names) const;

  // True when both frames span the same variables (same domains), in any order.
  bool same_variables(const Frame& other) const;

  bool operator==(const Frame& other) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Builds a frame; rejects duplicate names, empty or repeated domain values,
// and products above kConfigCap.
Frame build_frame(std::vector<Variable> variables);

// A set of configurations in canonical form: strictly increasing indices.
// The frame is carried by the owner (mass function, population), not the set.
class ConfigSet {
 public:
  ConfigSet() = default;

  static ConfigSet from_sorted(std::vector<std::uint32_t> members);
  static ConfigSet from_unsorted(std::vector<std::uint32_t> members);
  static ConfigSet full(std::uint32_t config_count);
  static ConfigSet singleton(std::uint32_t config);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const std::uint32_t> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(std::uint32_t config) const noexcept;
  bool subset_of(const ConfigSet& other) const noexcept;
  bool intersects(const ConfigSet& other) const noexcept;

  friend ConfigSet intersect(const ConfigSet& a, const ConfigSet& b);
  friend ConfigSet unite(const ConfigSet& a, const ConfigSet& b);
  friend ConfigSet difference(const ConfigSet& a, const ConfigSet& b);

  auto operator<=>(const ConfigSet&) const = default;
  bool operator==(const ConfigSet&) const = default;

 private:
  explicit ConfigSet(std::vector<std::uint32_t> members) : members_(std::move(members)) {}
  std::vector<std::uint32_t> members_;
};

// Per-variable value subsets, in frame order. Each entry holds value indices.
using ProductFactors = std::vector<std::vector<std::uint32_t>>;

ConfigSet product_set(const Frame& frame, const ProductFactors& factors);
ConfigSet product_set(const Frame& frame, const std::vector<std::vector<std::string>>& labels);

// A↓target over frame.sub_frame(target).
ConfigSet project_set(const Frame& frame, const ConfigSet& set, std::span<const std::string> target);

// A↑target, where `from` spans a subset of target's variables (any order).
ConfigSet cylinder_extend(const Frame& from, const ConfigSet& set, const Frame& target);

// Per-variable factors when `set` equals the product of its projections.
std::optional<ProductFactors> factorize_product(const Frame& frame, const ConfigSet& set);

// Maps every configuration of `from` to its projection in `to`
// (to's variables must all occur in from).
std::vector<std::uint32_t> projection_table(const Frame& from, const Frame& to);

std::string format_config(const Frame& frame, std::uint32_t config);

}  // namespace dsbn
