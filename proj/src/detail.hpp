#pragma once

#include <vector>

#include "dsbn/evidence.hpp"

namespace dsbn::detail {

// Every nonempty intersection of generator subfamilies, plus the full frame.
std::vector<ConfigSet> intersection_closure(const std::vector<ConfigSet>& generators, std::uint32_t config_count);

double commonality_of(const FocalMap& focals, const ConfigSet& set);

// m's focal sets lifted (or reordered) onto target, masses untouched.
FocalMap extend_focals(const MassFunction& m, const Frame& target);

}  // namespace dsbn::detail
