#pragma once

// Lattice points of μ+L ordered by the majorant, the truncated q-expansion of the
// Φ-weighted theta series, its numerical value, and the divergence-witness scan.
// Convention: q = e^{2πiτ}, so |q| < 1 for Im τ > 0.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itheta/incidence.hpp"
#include "itheta/quadratic_space.hpp"
#include "itheta/signwalk.hpp"

namespace itheta {

struct LatticePoint {
    std::vector<long> k;   // lattice coordinates; the point is B·(k + μ)
    VectorR x;             // ambient coordinates
    Rational norm;         // (x,x)
    Rational majorant;     // majorant(x,x)
};

/// Every point of μ+L with majorant(x,x) <= bound, each once, sorted by (majorant, k).
/// Candidates come from a floating-point Fincke-Pohst walk with slack; membership is decided exactly.
std::vector<LatticePoint> enumerate_lattice_points(const QuadraticSpace& space, const Lattice& lattice,
                                                   const MajorantForm& majorant, const Rational& bound);

enum class Completeness { certified, doubling_checked, heuristic };
std::string to_string(Completeness c);

struct QExpansion {
    std::map<Rational, long> coeffs;  // exponent m -> c(m), nonzero entries only
    Rational truncation;              // M
    Rational bound;                   // majorant bound B actually used
    Completeness completeness = Completeness::heuristic;
    std::string config_digest;
    std::size_t points = 0;           // lattice points enumerated at `bound`
    std::size_t n_vectors = 0;        // N, for tail bounds
    int w_c = 0;
    double r_inf = std::numeric_limits<double>::infinity();
    // min of (x,x)/majorant(x,x) over enumerated points with Φ != 0; +inf when there are none.
    double r_support = std::numeric_limits<double>::infinity();
    std::vector<std::string> warnings;
    // Φ(0) = -w_C when 0 ∈ μ+L (w vanishes at the origin since every sign is 0), else 0.
    // It is the only term with m <= 0 that survives for a valid configuration.
    long origin_term = 0;
    // Exponents m <= 0 whose coefficient differs from the origin term alone (empty for a valid configuration).
    std::vector<Rational> vanishing_violations;
    // Σ|Φ| per exponent for enumerated points beyond M (enters the evaluation error bound).
    std::map<Rational, long> beyond_abs;
    // Majorant pulled back to lattice coordinates, and μ, for tail bounds.
    MatrixR lattice_majorant;
    VectorR mu;

    long coefficient(const Rational& m) const;
};

struct ThetaOptions {
    /// Majorant bound. Default: 2M / r (r = r_inf when finite, else 1), plus one.
    std::optional<Rational> bound;
    std::optional<ReferenceWeight> reference;
    /// r_inf from a convergence certificate; +inf means "no vertex-only cones".
    std::optional<double> r_inf;
    double support_tolerance = 1e-9;
    bool doubling_check = true;
};

/// c(m) = Σ Φ(x) over x ∈ μ+L with (x,x)/2 = m <= M. The reference weight and r_inf are computed
/// when not supplied (which requires a valid configuration).
QExpansion theta_coefficients(const ConeConfig& config, const Lattice& lattice, const Rational& truncation,
                              const ThetaOptions& options = {});

struct ThetaValue {
    std::complex<double> value;
    std::optional<double> tail_bound;
};

/// Σ c(m) q^m in increasing m. The tail bound is attached when the expansion is certified.
ThetaValue theta_evaluate(const QExpansion& expansion, std::complex<double> tau);

/// Σ over majorant(x,x) <= bound of Φ(x) q^{(x,x)/2}.
std::complex<double> theta_partial_sum(const ConeConfig& config, const Lattice& lattice, const ReferenceWeight& reference,
                                       std::complex<double> tau, const Rational& bound);

/// Upper bound for 2N Σ_{y ∈ μ+Z^d, yᵀQy > bound} e^{-π v r yᵀQy / 2} with Q the majorant in lattice
/// coordinates. Points are summed explicitly over a window past the bound; the rest is bounded by box counts.
double theta_tail_bound(const MatrixR& lattice_majorant, const VectorR& mu, std::size_t n_vectors, double v, double r,
                        const Rational& bound);

struct DivergenceWitness {
    std::vector<long> k;
    VectorR x;
    Rational norm;
    int phi = 0;
};

/// All lattice points with |k_i| <= radius, (x,x) < 0 and Φ(x) != 0, ordered by k.
/// Requires (I.1) and (I.2). Without a reference the configuration must be valid.
std::vector<DivergenceWitness> divergence_witness_scan(const ConeConfig& config, const Lattice& lattice, long radius,
                                                       const std::optional<ReferenceWeight>& reference = std::nullopt);

/// Reference weight taken at a given negative regular vector (for invalid configurations).
ReferenceWeight reference_at(const ConeConfig& config, std::span<const Rational> v);

}  // namespace itheta
