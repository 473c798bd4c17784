#pragma once

// Exact rational carriers. Rational is GMP's mpq_class, which keeps values
// canonical (reduced, positive denominator) after every arithmetic operation.

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itheta {

using Rational = mpq_class;
using Integer = mpz_class;
using VectorR = std::vector<Rational>;

/// Dense row-major rational matrix.
class MatrixR {
public:
    MatrixR() = default;
    MatrixR(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static MatrixR identity(std::size_t n);
    static MatrixR diagonal(std::span<const Rational> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    VectorR column(std::size_t c) const;
    MatrixR transpose() const;
    bool is_symmetric() const;

    friend bool operator==(const MatrixR& a, const MatrixR& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

MatrixR operator*(const MatrixR& a, const MatrixR& b);
VectorR operator*(const MatrixR& a, std::span<const Rational> x);

/// Exact inverse by Gauss-Jordan; throws ValidationError when singular.
MatrixR inverse(const MatrixR& m);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
VectorR scaled(std::span<const Rational> x, const Rational& s);
VectorR add(std::span<const Rational> a, std::span<const Rational> b);
VectorR sub(std::span<const Rational> a, std::span<const Rational> b);
bool is_zero(std::span<const Rational> x);

inline int sign(const Rational& q) { return sgn(q); }

/// Parses "p/q", "p" or a decimal integer; throws ValidationError otherwise.
Rational parse_rational(std::string_view text);
/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);
std::string to_string(std::span<const Rational> x);

/// Smallest positive integer D with D*x integral.
Integer common_denominator(std::span<const Rational> x);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational approximate(double value, long max_den);

}  // namespace itheta
