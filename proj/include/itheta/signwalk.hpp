#pragma once

// The sign-pairing weight w(x;C) = Σ_j sgn(x,C_j)·sgn(x,C_{j+1}) (with sgn(0) = 0),
// the reference value on negative vectors, Φ = w - w_C, winding counts, and the
// path audits behind the constancy of w on the negative cone.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itheta/incidence.hpp"
#include "itheta/random.hpp"

namespace itheta {

struct SignVector {
    std::vector<int> signs;
    friend bool operator==(const SignVector&, const SignVector&) = default;
};

SignVector sign_vector(const ConeConfig& config, std::span<const Rational> x);
bool is_regular(const ConeConfig& config, std::span<const Rational> x);
int w_from_signs(std::span<const int> signs);
int evaluate_w(const ConeConfig& config, std::span<const Rational> x);

struct ReferenceWeight {
    int w_c = 0;
    VectorR witness;
    bool audited = false;
    std::size_t audit_samples = 0;
};

struct ReferenceOptions {
    std::size_t audit_samples = 256;
    std::uint64_t seed = 0x5eed;
    std::size_t search_budget = 4096;
    /// Skip the validity precondition and the audit; the result is w at the first witness.
    bool allow_invalid = false;
};

/// w on a negative regular witness from a deterministic candidate ladder, audited on random
/// negative regular vectors. Throws ValidationError for configs failing check_all (unless
/// allow_invalid), ComputationError when no witness is found or the audit disagrees.
ReferenceWeight reference_weight(const ConeConfig& config, const ReferenceOptions& options = {});

/// Φ(x;C) = w(x;C) - w_C. Without a reference one is computed (valid configs only).
int phi(const ConeConfig& config, std::span<const Rational> x,
        const std::optional<ReferenceWeight>& reference = std::nullopt);

/// r with w(v;C) = N - 4r: half the number of cyclic sign changes. Throws ValidationError if v is not regular.
long winding_count(const ConeConfig& config, std::span<const Rational> v);

struct PathReport {
    enum class Status { constant, w_jump, wall_product };
    Status status = Status::constant;
    int w_value = 0;             // w on the first regular piece
    std::size_t crossings = 0;   // wall crossings met along the path
    std::size_t samples = 0;     // regular sample points evaluated
    // First violation, when status != constant.
    std::size_t segment = 0;
    Rational t;                  // parameter on the segment
    std::size_t wall = 0;        // 1-based wall index for wall_product
    int w_before = 0;
    int w_after = 0;
    std::string message;
};

std::string to_string(PathReport::Status s);

/// Walks the polyline vertex[0] -> vertex[1] -> ... Every wall crossing is located exactly;
/// w is evaluated between crossings and at `steps` evenly spaced parameters per segment.
/// Throws ValidationError when some point of the path has (x,x) >= 0.
PathReport path_constancy_check(const ConeConfig& config, std::span<const VectorR> path, std::size_t steps);

/// Exact test that (γ(t),γ(t)) < 0 for all t in [0,1] on the segment a -> b.
bool segment_is_negative(const QuadraticSpace& space, std::span<const Rational> a, std::span<const Rational> b);

/// Random rational negative vector (built in diagonalizing coordinates, verified exactly).
VectorR random_negative_vector(const QuadraticSpace& space, Rng& rng, long den = 997);
/// Random negative vector that is regular at the configuration.
VectorR random_negative_regular_vector(const ConeConfig& config, Rng& rng);
/// Random negative vector v with (v, C_j) = 0 (0-based j). Throws ComputationError if none found.
VectorR random_negative_wall_vector(const ConeConfig& config, std::size_t j, Rng& rng);

/// Basis of the rational kernel {x : row·x = 0}.
std::vector<VectorR> kernel_basis(std::span<const Rational> row);

/// Exact evaluation of signs and norms for points x = num / den with integer numerators.
/// Inner products with C_j are rescaled to integer rows, so no rational arithmetic happens per point.
class SignKernel {
public:
    explicit SignKernel(const ConeConfig& config);

    std::size_t size() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

    /// Signs of (x, C_j) for x proportional to num (positive factor).
    void signs(std::span<const std::int64_t> num, std::span<int> out) const;
    int w(std::span<const std::int64_t> num) const;
    /// num^T·gram_int·num, a positive multiple of (x,x) (multiplier = 1/norm_scale()).
    Integer norm_numerator(std::span<const std::int64_t> num) const;
    /// gram_int = norm_scale * gram.
    const Integer& norm_scale() const { return gram_scale_; }

private:
    std::size_t dim_ = 0;
    bool small_ = true;
    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<std::vector<Integer>> big_rows_;
    std::vector<Integer> gram_int_;
    Integer gram_scale_;
};

}  // namespace itheta
