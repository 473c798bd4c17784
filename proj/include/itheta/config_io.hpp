#pragma once

// JSON form of a configuration:
//   {"gram": [[...], ...], "vectors": [[...], ...], "basis": [[...], ...], "mu": [...]}
// Entries are integers or "p/q" strings. "basis" (lattice generators, one per entry) and "mu"
// (coset offset in lattice coordinates) are optional and default to Z^d and 0.

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "itheta/incidence.hpp"
#include "itheta/quadratic_space.hpp"

namespace itheta {

using Json = nlohmann::ordered_json;

struct ConfigFile {
    ConeConfig config;
    Lattice lattice;
};

/// Throws ValidationError with "line L, column C" for syntax errors and the JSON pointer of the
/// offending entry for schema violations.
ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);

Json rational_json(const Rational& q);  // integer when integral, else "p/q"
Json vector_json(std::span<const Rational> v);
Json config_json(const ConeConfig& config, const Lattice* lattice = nullptr);

/// "a,b,c" with rational entries.
VectorR parse_vector(std::string_view text);

}  // namespace itheta
