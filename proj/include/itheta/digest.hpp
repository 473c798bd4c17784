#pragma once

#include <string>
#include <string_view>

#include "itheta/incidence.hpp"
#include "itheta/quadratic_space.hpp"

namespace itheta {

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Canonical text of the exact inputs (gram, vectors, lattice basis and μ).
std::string canonical_text(const ConeConfig& config, const Lattice* lattice = nullptr);

inline std::string input_digest(const ConeConfig& config, const Lattice* lattice = nullptr) {
    return fnv1a_hex(canonical_text(config, lattice));
}

}  // namespace itheta
