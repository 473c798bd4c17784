#pragma once

// Sign components of Reg(C) (the open cones on which every (x, C_j) has a fixed
// sign), their position relative to the negative cone, and the convergence
// certificate r_inf = min over vertex-only cones of inf (x,x)/majorant(x,x).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "itheta/incidence.hpp"
#include "itheta/quadratic_space.hpp"

namespace itheta {

enum class ClosureClass { meets_negative, boundary_touch, vertex_only };
std::string to_string(ClosureClass c);

struct SignComponent {
    std::vector<int> signs;     // entries ±1
    VectorR witness;            // exact: signs[j]·(witness, C_j) >= 1
    int w_value = 0;
    // Filled by classify_component.
    std::optional<ClosureClass> closure_class;
    bool meets_negative = false;
    double inf_ratio = 0.0;       // inf of (x,x)/majorant(x,x) over the closed cone
    bool exact_class = false;     // an exact rational witness confirms the class
    VectorR class_witness;        // negative (or null) exact witness when exact_class
};

struct EnumerationOptions {
    /// Maximum number of exact LP solves before giving up on exact enumeration.
    std::size_t budget = 200000;
    /// On budget exhaustion, fall back to randomized search instead of throwing.
    bool random_fallback = false;
    std::size_t random_samples = 200000;
    std::uint64_t seed = 0xc0ffee;
};

struct EnumerationResult {
    std::vector<SignComponent> components;  // sorted by sign vector, -1 < +1
    bool complete = true;
    std::size_t lp_solves = 0;
    std::string method;
};

/// Realizable sign vectors with exact witnesses, via a prefix tree of exact LP feasibility
/// problems {s_j·(x, C_j) >= 1}. Throws ComputationError when the budget runs out and
/// random_fallback is off.
EnumerationResult enumerate_components(const ConeConfig& config, const EnumerationOptions& options = {});

/// Exact LP test for a single sign vector; returns a witness when realizable.
std::optional<VectorR> realize_signs(const ConeConfig& config, const std::vector<int>& signs);

struct ClassifyOptions {
    double dead_band = 1e-6;        // |inf| below this is boundary_touch
    double membership_tol = 1e-9;   // slack for numerical cone membership
    std::size_t samples = 2000;     // hit-and-run samples cross-checking the stationary-point search
    std::uint64_t seed = 0xfeed;
};

/// Sets closure_class, meets_negative, inf_ratio and the exact witness fields.
/// The infimum is found by enumerating stationary points of the ratio on every face span
/// (generalized eigenvectors of the pencil restricted to intersections of walls), then
/// cross-checked with hit-and-run samples. Throws ComputationError if no candidate lies in the cone.
void classify_component(const ConeConfig& config, const MajorantForm& majorant, SignComponent& component,
                        const ClassifyOptions& options = {});

struct SampleValidation {
    std::size_t samples = 0;       // total over all vertex-only cones
    std::size_t violations = 0;    // samples with ratio < r_inf - tolerance
    double min_observed_ratio = std::numeric_limits<double>::infinity();
};

struct ConvergenceCertificate {
    std::vector<SignComponent> vertex_only_cones;
    std::vector<double> per_cone_inf;          // aligned with vertex_only_cones
    double r_inf = std::numeric_limits<double>::infinity();  // +inf when there are no vertex-only cones
    double tolerance = 1e-6;
    std::string method;
    SampleValidation validation;
    bool partial = false;
    std::string note;
    // All components, classified, for reporting.
    std::vector<SignComponent> components;
    bool enumeration_complete = true;

    bool finite() const { return r_inf < std::numeric_limits<double>::infinity(); }
};

struct CertificateOptions {
    EnumerationOptions enumeration;
    ClassifyOptions classify;
    std::size_t validation_samples = 10000;  // per vertex-only cone
    double tolerance = 1e-6;
    std::uint64_t seed = 0xabc;
};

/// Requires check_all(config).overall (ValidationError otherwise).
ConvergenceCertificate compute_r_inf(const ConeConfig& config, const CertificateOptions& options = {});

/// Uniform-ish points of the open cone of `component` intersected with majorant(x,x) <= 1
/// (hit-and-run started from the exact witness). Coordinates are doubles.
std::vector<std::vector<double>> sample_cone(const ConeConfig& config, const MajorantForm& majorant,
                                             const SignComponent& component, std::size_t count, std::uint64_t seed);

}  // namespace itheta
