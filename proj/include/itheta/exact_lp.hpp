#pragma once

#include <optional>
#include <span>
#include <vector>

#include "itheta/rational.hpp"

namespace itheta {

/// Exact phase-I simplex over the rationals (Bland's rule, so it terminates).
/// Returns some x with rows[i]·x >= rhs[i] for every i, or nullopt when none exists.
/// The variables are free.
std::optional<VectorR> solve_feasibility(std::span<const VectorR> rows, std::span<const Rational> rhs);

}  // namespace itheta
