#pragma once

#include <cstddef>
#include <span>

#include "itheta/rational.hpp"

namespace itheta {

/// Result of an exact congruence diagonalization: diagonalizerᵀ·gram·diagonalizer = diag(diag).
struct SignatureCertificate {
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    MatrixR diagonalizer;
    VectorR diag;
};

/// Symmetric Gaussian congruence with pivot search. Throws ValidationError on a
/// non-symmetric or degenerate Gram matrix. No floating point is involved.
SignatureCertificate certify_signature(const MatrixR& gram);

/// A nondegenerate rational quadratic space of signature (n,2).
class QuadraticSpace {
public:
    /// Throws ValidationError unless gram is symmetric, nondegenerate, with exactly two negative squares.
    explicit QuadraticSpace(MatrixR gram);

    std::size_t dim() const { return gram_.rows(); }
    std::size_t dim_pos() const { return cert_.n_pos; }
    std::size_t dim_neg() const { return cert_.n_neg; }
    const MatrixR& gram() const { return gram_; }
    const MatrixR& diagonalizer() const { return cert_.diagonalizer; }
    const VectorR& diag() const { return cert_.diag; }
    const SignatureCertificate& certificate() const { return cert_; }

    /// Columns of the diagonalizer with negative diagonal entry (they span a negative plane).
    VectorR negative_direction(std::size_t which) const;
    /// Columns of the diagonalizer with positive diagonal entry.
    VectorR positive_direction(std::size_t which) const;

    Rational inner_product(std::span<const Rational> x, std::span<const Rational> y) const;
    Rational norm(std::span<const Rational> x) const { return inner_product(x, x); }

    /// gram·x, the linear functional y ↦ (y,x) as a row.
    VectorR functional(std::span<const Rational> x) const;

private:
    MatrixR gram_;
    SignatureCertificate cert_;
    std::vector<std::size_t> neg_idx_;
    std::vector<std::size_t> pos_idx_;
};

Rational inner_product(const QuadraticSpace& space, std::span<const Rational> x, std::span<const Rational> y);

/// Positive definite form on the ambient coordinates.
struct MajorantForm {
    MatrixR gram;
    Rational value(std::span<const Rational> x) const;
};

/// Flip construction: |diag| in the diagonalizing coordinates, transported back.
/// Satisfies majorant(x,x) >= |(x,x)| for every x.
MajorantForm build_majorant(const QuadraticSpace& space);

/// The coset μ + L with L spanned by the columns of basis; μ is given in lattice coordinates.
class Lattice {
public:
    explicit Lattice(const QuadraticSpace& space);
    Lattice(const QuadraticSpace& space, MatrixR basis, VectorR mu);

    std::size_t rank() const { return basis_.cols(); }
    const MatrixR& basis() const { return basis_; }
    const VectorR& mu() const { return mu_; }

    /// Ambient coordinates of B·(k + μ).
    VectorR point(std::span<const long> k) const;
    /// Bᵀ·form·B, i.e. a form pulled back to lattice coordinates.
    MatrixR pull_back(const MatrixR& form) const;

    /// True when 2(μ, y) is integral for every lattice generator y, the pattern of μ ∈ L^∨.
    bool mu_in_dual(const QuadraticSpace& space) const;

private:
    MatrixR basis_;
    VectorR mu_;
};

}  // namespace itheta
