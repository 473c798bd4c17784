#pragma once

// Shared test configurations and small helpers.

#include <initializer_list>
#include <string>
#include <vector>

#include "itheta/incidence.hpp"
#include "itheta/rational.hpp"

namespace fixtures {

using itheta::ConeConfig;
using itheta::MatrixR;
using itheta::QuadraticSpace;
using itheta::Rational;
using itheta::VectorR;

inline Rational R(const char* text) { return itheta::parse_rational(text); }

inline VectorR V(std::initializer_list<const char*> coords) {
    VectorR v;
    for (const char* c : coords) v.push_back(R(c));
    return v;
}

inline MatrixR diag(std::initializer_list<long> d) {
    VectorR v;
    for (long x : d) v.emplace_back(x);
    return MatrixR::diagonal(v);
}

inline QuadraticSpace space_112() { return QuadraticSpace(diag({-1, -1, 1})); }

// Three negative vectors in the coordinate negative plane winding once.
inline ConeConfig config_a() {
    return ConeConfig(space_112(), {V({"1", "0", "0"}), V({"0", "1", "0"}), V({"-4/5", "-3/5", "0"})});
}

// Same plane, but the loop backtracks at C_1 and C_2.
inline ConeConfig config_b() {
    return ConeConfig(space_112(), {V({"1", "0", "0"}), V({"0", "1", "0"}), V({"3/5", "4/5", "0"})});
}

// Eight vectors (cos θ_j, sin θ_j, h) tilted out of the negative plane, θ_j = jπ/4 rationalised
// through tan-half-angle points. The cell containing (0,0,1) stays inside the positive cone,
// so this configuration has cones whose closure meets the closed negative cone only at 0.
inline ConeConfig config_tilted(const char* height = "1/2") {
    const std::vector<std::pair<const char*, const char*>> pts = {
        {"1", "0"},      {"12/17", "12/17"}, {"0", "1"},      {"-12/17", "12/17"},
        {"-1", "0"},     {"-12/17", "-12/17"}, {"0", "-1"},   {"12/17", "-12/17"}};
    std::vector<VectorR> vs;
    for (auto [a, b] : pts) vs.push_back(V({a, b, height}));
    return ConeConfig(space_112(), std::move(vs));
}

}  // namespace fixtures
