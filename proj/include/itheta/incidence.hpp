#pragma once

// Cyclic cone configurations C_1..C_N and exact checks of the incidence
// conditions (I.1)-(I.3). Indices in reports are 1-based, matching the
// cyclic convention C_0 = C_N, C_{N+1} = C_1.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "itheta/quadratic_space.hpp"

namespace itheta {

class ConeConfig {
public:
    /// Throws ValidationError for N < 2, zero vectors or dimension mismatches.
    ConeConfig(QuadraticSpace space, std::vector<VectorR> vectors);

    const QuadraticSpace& space() const { return space_; }
    std::size_t size() const { return vectors_.size(); }
    std::size_t dim() const { return space_.dim(); }

    /// 0-based access with cyclic wraparound on any signed index.
    const VectorR& at(long j) const { return vectors_[wrap(j)]; }
    const std::vector<VectorR>& vectors() const { return vectors_; }

    /// (C_i, C_j), 0-based and cyclic.
    const Rational& gram(long i, long j) const { return gram_cache_[wrap(i) * size() + wrap(j)]; }
    const Rational& norm(long j) const { return gram(j, j); }

    std::size_t wrap(long j) const {
        const long n = static_cast<long>(size());
        return static_cast<std::size_t>(((j % n) + n) % n);
    }

    /// Same configuration relabelled j -> j + shift.
    ConeConfig rotated(long shift) const;
    /// Same configuration traversed in the opposite cyclic order.
    ConeConfig reversed() const;

private:
    QuadraticSpace space_;
    std::vector<VectorR> vectors_;
    std::vector<Rational> gram_cache_;
};

enum class Condition { I1, I2, I3, NoThreeNulls };
std::string to_string(Condition c);

struct I1Verdict {
    std::size_t j = 0;  // 1-based
    Rational norm;
    bool pass = false;
};

struct I2Verdict {
    enum class Branch { determinant, orthogonality, vacuous };
    std::size_t j = 0;  // pair (C_j, C_{j+1}), 1-based
    Rational norm_product;
    Rational tested;  // the 2x2 Gram determinant, or (C_j,C_{j+1}) on the orthogonality branch
    Branch branch = Branch::vacuous;
    bool pass = false;
};

struct I3Verdict {
    enum class Branch { negative_norm, null_vector, vacuous };
    std::size_t j = 0;  // 1-based
    Rational tested;
    Branch branch = Branch::vacuous;
    bool pass = false;
};

struct Violation {
    Condition condition;
    std::size_t j = 0;  // 1-based; 0 for no-three-nulls
    Rational value;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct IncidenceReport {
    std::vector<I1Verdict> i1;
    std::vector<I2Verdict> i2;
    std::vector<I3Verdict> i3;
    bool no_three_nulls = true;
    bool overall = false;
    std::vector<Violation> violations;
};

std::string to_string(I2Verdict::Branch b);
std::string to_string(I3Verdict::Branch b);

std::vector<I1Verdict> check_I1(const ConeConfig& config);
std::vector<I2Verdict> check_I2(const ConeConfig& config);
std::vector<I3Verdict> check_I3(const ConeConfig& config);
bool check_no_three_nulls(const ConeConfig& config);
/// All of the above; overall = (I.1) and (I.2) and (I.3). The no-three-nulls flag is
/// reported but only feeds the converse direction, so it does not affect overall.
IncidenceReport check_all(const ConeConfig& config);

enum class GeneratorMode { planar, perturbed };

struct GeneratorOptions {
    GeneratorMode mode = GeneratorMode::planar;
    /// Planar loops turn through 2π·winding in steps strictly between 0 and π.
    unsigned winding = 1;
    /// When false the step directions are random: (I.1) and (I.2) hold, (I.3) usually fails.
    bool monotone = true;
    /// Perturbed mode: each coordinate (in diagonalizing coordinates) moves by at most this much.
    Rational perturbation = Rational(1, 10);
    unsigned max_attempts = 2000;
    /// Denominator bound for the tan-half-angle parameters of circle points.
    long denominator_bound = 32;
};

/// A configuration passing check_all. Throws ComputationError after max_attempts rejections.
ConeConfig random_valid_config(const QuadraticSpace& space, std::size_t n, GeneratorMode mode, std::uint64_t seed);
/// General generator. monotone=true guarantees check_all passes; monotone=false only
/// guarantees (I.1), (I.2) and no-three-nulls.
ConeConfig random_config(const QuadraticSpace& space, std::size_t n, const GeneratorOptions& options,
                         std::uint64_t seed);

/// Rational point ((1-t²)/(1+t²), 2t/(1+t²)) of the unit circle.
std::pair<Rational, Rational> circle_point(const Rational& t);

}  // namespace itheta
