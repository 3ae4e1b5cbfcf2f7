#include "dsbn/frames.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace dsbn {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "invalid argument";
    case Errc::DuplicateName: return "duplicate name";
    case Errc::UnknownName: return "unknown name";
    case Errc::CapExceeded: return "cap exceeded";
    case Errc::FrameMismatch: return "frame mismatch";
    case Errc::EmptySet: return "empty set";
    case Errc::InvalidMass: return "invalid mass";
    case Errc::TotalConflict: return "total conflict";
    case Errc::ZeroCommonality: return "zero commonality";
    case Errc::EmptyPopulation: return "empty population";
    case Errc::NotAcyclic: return "not acyclic";
    case Errc::FinalizationStuck: return "finalization stuck";
    case Errc::Parse: return "parse error";
    case Errc::Io: return "i/o error";
  }
  return "error";
}

struct Frame::Impl {
  std::vector<Variable> variables;
  std::vector<std::uint32_t> radices;
  std::vector<std::uint32_t> strides;
  std::uint32_t config_count = 1;
  std::unordered_map<std::string, std::size_t> index;
};

Frame::Frame() {
  static const auto empty = std::make_shared<const Impl>();
  impl_ = empty;
}

Frame::Frame(std::vector<Variable> variables) {
  auto impl = std::make_shared<Impl>();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    if (v.domain.empty()) throw Error(Errc::InvalidArgument, "variable '" + v.name + "' has an empty domain");
    std::unordered_set<std::string> seen(v.domain.begin(), v.domain.end());
    if (seen.size() != v.domain.size())
      throw Error(Errc::DuplicateName, "variable '" + v.name + "' repeats a domain value");
    if (!impl->index.emplace(v.name, i).second) throw Error(Errc::DuplicateName, "variable '" + v.name + "'");
    count *= v.domain.size();
    if (count > kConfigCap)
      throw Error(Errc::CapExceeded, "frame spans more than " + std::to_string(kConfigCap) + " configurations");
  }
  impl->config_count = static_cast<std::uint32_t>(count);
  impl->radices.resize(variables.size());
  impl->strides.resize(variables.size());
  std::uint32_t stride = 1;
  for (std::size_t i = variables.size(); i-- > 0;) {
    impl->radices[i] = static_cast<std::uint32_t>(variables[i].domain.size());
    impl->strides[i] = stride;
    stride *= impl->radices[i];
  }
  impl->variables = std::move(variables);
  impl_ = std::move(impl);
}

std::size_t Frame::size() const noexcept { return impl_->variables.size(); }
std::uint32_t Frame::config_count() const noexcept { return impl_->config_count; }

const Variable& Frame::variable(std::size_t i) const { return impl_->variables.at(i); }
std::span<const Variable> Frame::variables() const noexcept { return impl_->variables; }

VarNames Frame::names() const {
  VarNames out;
  out.reserve(size());
  for (const auto& v : impl_->variables) out.push_back(v.name);
  return out;
}

std::optional<std::size_t> Frame::index_of(std::string_view name) const noexcept {
  auto it = impl_->index.find(std::string(name));
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Frame::require_index(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw Error(Errc::UnknownName, "variable '" + std::string(name) + "' not in frame");
  return *i;
}

std::uint32_t Frame::radix(std::size_t i) const { return impl_->radices.at(i); }
std::uint32_t Frame::stride(std::size_t i) const { return impl_->strides.at(i); }

std::uint32_t Frame::encode(std::span<const std::uint32_t> values) const {
  if (values.size() != size()) throw Error(Errc::InvalidArgument, "configuration arity does not match frame");
  std::uint32_t config = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= impl_->radices[i]) throw Error(Errc::InvalidArgument, "value index out of domain");
    config += values[i] * impl_->strides[i];
  }
  return config;
}

std::vector<std::uint32_t> Frame::decode(std::uint32_t config) const {
  std::vector<std::uint32_t> values(size());
  for (std::size_t i = 0; i < size(); ++i) values[i] = (config / impl_->strides[i]) % impl_->radices[i];
  return values;
}

std::uint32_t Frame::digit(std::uint32_t config, std::size_t var) const {
  return (config / impl_->strides[var]) % impl_->radices[var];
}

Frame Frame::sub_frame(std::span<const std::string> names) const {
  if (names.empty()) throw Error(Errc::InvalidArgument, "empty target variable set");
  std::vector<bool> keep(size(), false);
  for (const auto& n : names) {
    auto i = require_index(n);
    if (keep[i]) throw Error(Errc::DuplicateName, "variable '" + n + "' listed twice");
    keep[i] = true;
  }
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < size(); ++i)
    if (keep[i]) vars.push_back(impl_->variables[i]);
  return Frame(std::move(vars));
}

bool Frame::same_variables(const Frame& other) const {
  if (size() != other.size()) return false;
  for (const auto& v : impl_->variables) {
    auto j = other.index_of(v.name);
    if (!j || other.variable(*j).domain != v.domain) return false;
  }
  return true;
}

bool Frame::operator==(const Frame& other) const {
  return impl_ == other.impl_ || impl_->variables == other.impl_->variables;
}

Frame build_frame(std::vector<Variable> variables) {
  if (variables.empty()) throw Error(Errc::InvalidArgument, "a frame needs at least one variable");
  return Frame(std::move(variables));
}

// ---------------------------------------------------------------------------

ConfigSet ConfigSet::from_sorted(std::vector<std::uint32_t> members) {
  for (std::size_t i = 1; i < members.size(); ++i)
    if (members[i - 1] >= members[i]) throw Error(Errc::InvalidArgument, "config indices not strictly increasing");
  return ConfigSet(std::move(members));
}

ConfigSet ConfigSet::from_unsorted(std::vector<std::uint32_t> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ConfigSet(std::move(members));
}

ConfigSet ConfigSet::full(std::uint32_t config_count) {
  std::vector<std::uint32_t> m(config_count);
  std::iota(m.begin(), m.end(), 0u);
  return ConfigSet(std::move(m));
}

ConfigSet ConfigSet::singleton(std::uint32_t config) { return ConfigSet({config}); }

bool ConfigSet::contains(std::uint32_t config) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), config);
}

bool ConfigSet::subset_of(const ConfigSet& other) const noexcept {
  if (size() > other.size()) return false;
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

bool ConfigSet::intersects(const ConfigSet& other) const noexcept {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

ConfigSet intersect(const ConfigSet& a, const ConfigSet& b) {
  std::vector<std::uint32_t> out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return ConfigSet(std::move(out));
}

ConfigSet unite(const ConfigSet& a, const ConfigSet& b) {
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return ConfigSet(std::move(out));
}

ConfigSet difference(const ConfigSet& a, const ConfigSet& b) {
  std::vector<std::uint32_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return ConfigSet(std::move(out));
}

// ---------------------------------------------------------------------------

ConfigSet product_set(const Frame& frame, const ProductFactors& factors) {
  if (factors.size() != frame.size()) throw Error(Errc::InvalidArgument, "one value subset per variable is required");
  std::vector<std::uint32_t> configs{0};
  for (std::size_t i = 0; i < frame.size(); ++i) {
    auto values = factors[i];
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty())
      throw Error(Errc::EmptySet, "empty value subset for '" + frame.variable(i).name + "'");
    if (values.back() >= frame.radix(i))
      throw Error(Errc::UnknownName, "value index out of domain for '" + frame.variable(i).name + "'");
    std::vector<std::uint32_t> next;
    next.reserve(configs.size() * values.size());
    for (auto c : configs)
      for (auto v : values) next.push_back(c + v * frame.stride(i));
    configs = std::move(next);
  }
  // Mixed radix with the leading variable most significant keeps this sorted.
  return ConfigSet::from_sorted(std::move(configs));
}

ConfigSet product_set(const Frame& frame, const std::vector<std::vector<std::string>>& labels) {
  if (labels.size() != frame.size()) throw Error(Errc::InvalidArgument, "one value subset per variable is required");
  ProductFactors factors(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& domain = frame.variable(i).domain;
    for (const auto& label : labels[i]) {
      auto it = std::find(domain.begin(), domain.end(), label);
      if (it == domain.end())
        throw Error(Errc::UnknownName, "value '" + label + "' not in domain of '" + frame.variable(i).name + "'");
      factors[i].push_back(static_cast<std::uint32_t>(it - domain.begin()));
    }
  }
  return product_set(frame, factors);
}

std::vector<std::uint32_t> projection_table(const Frame& from, const Frame& to) {
  std::vector<std::size_t> source(to.size());
  for (std::size_t j = 0; j < to.size(); ++j) {
    auto i = from.index_of(to.variable(j).name);
    if (!i || from.variable(*i).domain != to.variable(j).domain)
      throw Error(Errc::FrameMismatch, "variable '" + to.variable(j).name + "' missing or with another domain");
    source[j] = *i;
  }
  std::vector<std::uint32_t> table(from.config_count());
  for (std::uint32_t c = 0; c < from.config_count(); ++c) {
    std::uint32_t p = 0;
    for (std::size_t j = 0; j < to.size(); ++j) p += from.digit(c, source[j]) * to.stride(j);
    table[c] = p;
  }
  return table;
}

ConfigSet project_set(const Frame& frame, const ConfigSet& set, std::span<const std::string> target) {
  Frame sub = frame.sub_frame(target);
  auto table = projection_table(frame, sub);
  std::vector<std::uint32_t> out;
  out.reserve(set.size());
  for (auto c : set) out.push_back(table[c]);
  return ConfigSet::from_unsorted(std::move(out));
}

ConfigSet cylinder_extend(const Frame& from, const ConfigSet& set, const Frame& target) {
  if (set.empty()) throw Error(Errc::EmptySet, "cannot extend the empty set");
  auto table = projection_table(target, from);
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < target.config_count(); ++c)
    if (set.contains(table[c])) out.push_back(c);
  return ConfigSet::from_sorted(std::move(out));
}

std::optional<ProductFactors> factorize_product(const Frame& frame, const ConfigSet& set) {
  if (set.empty()) throw Error(Errc::EmptySet, "cannot factorize the empty set");
  ProductFactors factors(frame.size());
  std::uint64_t product = 1;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    std::vector<bool> seen(frame.radix(i), false);
    for (auto c : set) seen[frame.digit(c, i)] = true;
    for (std::uint32_t v = 0; v < seen.size(); ++v)
      if (seen[v]) factors[i].push_back(v);
    product *= factors[i].size();
  }
  // The product of projections always contains the set, so equal sizes suffice.
  if (product != set.size()) return std::nullopt;
  return factors;
}

std::string format_config(const Frame& frame, std::uint32_t config) {
  std::string out = "(";
  auto values = frame.decode(config);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += frame.variable(i).domain[values[i]];
  }
  return out + ")";
}

}  // namespace dsbn
