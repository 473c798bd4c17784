#pragma once

// The generalized error function E₂(C,C′;x) (normalized Gaussian over the negative plane
// spanned by C and C′, weighted by sgn(y,C)·sgn(y,C′)) and partial sums of the completed series
// Σ (-w_C + Σ_j E₂(C_j,C_{j+1}; √2·x)) q^{(x,x)/2}.

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itheta/incidence.hpp"
#include "itheta/quadratic_space.hpp"
#include "itheta/signwalk.hpp"

namespace itheta {

struct PlaneFrame {
    VectorR c, c_prime;                 // exact spanning vectors
    std::array<std::vector<double>, 2> f;  // (f_i, f_j) = -δ_ij
    std::array<double, 2> c_coords{};   // C = c_coords[0] f_1 + c_coords[1] f_2
    std::array<double, 2> c_prime_coords{};
    std::vector<double> gram;           // ambient form, row-major doubles
    std::size_t dim = 0;

    /// Angle between the two sign-change lines in z; E₂ at the centre equals 1 - 2φ/π.
    double angle() const;
};

/// Throws ValidationError when C, C′ are dependent or span a plane that is not negative definite
/// (decided exactly from the 2x2 Gram matrix).
PlaneFrame make_frame(const QuadraticSpace& space, std::span<const Rational> c, std::span<const Rational> c_prime);

/// Frame coordinates (p_1, p_2) of pr_z(x) = p_1 f_1 + p_2 f_2, with p_i = -(x, f_i).
std::array<double, 2> project_to_plane(const PlaneFrame& frame, std::span<const double> x);
/// Ambient coordinates of pr_z(x).
std::vector<double> projection_vector(const PlaneFrame& frame, std::span<const double> x);

struct E2Options {
    double tolerance = 1e-13;   // absolute tolerance over the whole integration range
    double radius = 8.0;        // cutoff in units of the Gaussian (e^{-π·64} is far below double precision)
    unsigned max_depth = 30;
    bool signless = false;      // replace the sign product by 1 (normalization check)
};

struct E2Result {
    double value = 0;
    double error = 0;
};

/// ∫_{R²} e^{-π|t-p|²} sgn(t·c) sgn(t·c′) dt in frame coordinates. One direction is done in
/// closed form (erf); the other by adaptive Gauss-Kronrod split at the kinks. Throws ComputationError
/// when the error estimate exceeds max(1e-9, 100·tolerance).
E2Result e2_quadrature(const PlaneFrame& frame, std::span<const double> x, const E2Options& options = {});
/// Same integral from the projected coordinates directly.
E2Result e2_at(const PlaneFrame& frame, std::array<double, 2> p, const E2Options& options = {});

struct PairFrame {
    std::size_t j = 0;  // pair (C_j, C_{j+1}), 1-based
    std::optional<PlaneFrame> frame;
    std::string problem;  // set when the frame is undefined
};

/// Frames of all consecutive pairs; degenerate pairs are reported, not regularized.
std::vector<PairFrame> pair_frames(const ConeConfig& config);

/// -w_C + Σ_j E₂(C_j, C_{j+1}; √2·x).
double completed_weight(const std::vector<PairFrame>& frames, int w_c, std::span<const double> x,
                        const E2Options& options = {});

struct ShellTerm {
    Rational majorant;
    std::size_t points = 0;
    double abs_sum = 0;  // Σ |weight·q^{(x,x)/2}| over the shell
};

struct CompletedTheta {
    std::complex<double> value;
    std::complex<double> value_doubled;  // same sum over majorant <= 2B
    std::vector<ShellTerm> shells;       // shells up to B
    double tail_estimate = 0;            // 2N Σ_{maj > B} e^{-π v r maj / 2}
    double ratio_bound = 0;              // r used in the tail estimate
    double doubling_ratio = 0;           // |S(2B) - S(B)| / tail_estimate
    double max_quadrature_error = 0;
    std::size_t points = 0;
};

/// Partial sums at B and 2B with per-shell diagnostics. ratio_bound is the r in the tail estimate
/// (a certified r_inf, or the empirical support ratio). Throws ValidationError when some pair is degenerate.
CompletedTheta completed_theta_partial(const ConeConfig& config, const Lattice& lattice, const ReferenceWeight& reference,
                                       std::complex<double> tau, const Rational& bound, double ratio_bound,
                                       const E2Options& options = {});

}  // namespace itheta
