#include "itheta/quadratic_space.hpp"

#include <utility>

#include "itheta/errors.hpp"

namespace itheta {

namespace {

// Congruence step on the working matrix: basis vector i <- basis vector i + f * basis vector j.
void add_multiple(MatrixR& a, MatrixR& t, std::size_t i, std::size_t j, const Rational& f) {
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) a(i, c) += f * a(j, c);
    for (std::size_t r = 0; r < n; ++r) a(r, i) += f * a(r, j);
    for (std::size_t r = 0; r < n; ++r) t(r, i) += f * t(r, j);
}

void swap_index(MatrixR& a, MatrixR& t, std::size_t i, std::size_t j) {
    if (i == j) return;
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < n; ++r) std::swap(t(r, i), t(r, j));
}

}  // namespace

SignatureCertificate certify_signature(const MatrixR& gram) {
    if (gram.rows() != gram.cols() || !gram.is_symmetric())
        throw ValidationError("Gram matrix must be square and symmetric");
    const std::size_t n = gram.rows();
    MatrixR a = gram;
    MatrixR t = MatrixR::identity(n);

    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t pivot = k;
            for (std::size_t i = k + 1; i < n && pivot == k; ++i)
                if (sgn(a(i, i)) != 0) pivot = i;
            if (pivot != k) {
                swap_index(a, t, k, pivot);
            } else {
                // All remaining diagonal entries vanish: e_i + e_j has norm 2 a_ij.
                bool fixed = false;
                for (std::size_t i = k; i < n && !fixed; ++i)
                    for (std::size_t j = i + 1; j < n && !fixed; ++j)
                        if (sgn(a(i, j)) != 0) {
                            add_multiple(a, t, i, j, Rational(1));
                            swap_index(a, t, k, i);
                            fixed = true;
                        }
                if (!fixed) throw ValidationError("degenerate quadratic form (zero after congruence)");
            }
        }
        const Rational pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (sgn(a(i, k)) == 0) continue;
            add_multiple(a, t, i, k, -a(i, k) / pivot);
        }
    }

    SignatureCertificate cert;
    cert.diagonalizer = std::move(t);
    cert.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cert.diag[i] = a(i, i);
        (sgn(a(i, i)) > 0 ? cert.n_pos : cert.n_neg) += 1;
    }
    return cert;
}

QuadraticSpace::QuadraticSpace(MatrixR gram) : gram_(std::move(gram)), cert_(certify_signature(gram_)) {
    if (cert_.n_neg != 2)
        throw ValidationError("signature (" + std::to_string(cert_.n_pos) + "," + std::to_string(cert_.n_neg) +
                              ") given where signature (n,2) is required");
    for (std::size_t i = 0; i < cert_.diag.size(); ++i)
        (sgn(cert_.diag[i]) < 0 ? neg_idx_ : pos_idx_).push_back(i);
}

VectorR QuadraticSpace::negative_direction(std::size_t which) const {
    return cert_.diagonalizer.column(neg_idx_.at(which));
}

VectorR QuadraticSpace::positive_direction(std::size_t which) const {
    return cert_.diagonalizer.column(pos_idx_.at(which));
}

Rational QuadraticSpace::inner_product(std::span<const Rational> x, std::span<const Rational> y) const {
    const std::size_t n = dim();
    if (x.size() != n || y.size() != n) throw ValidationError("inner_product: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(x[i]) == 0) continue;
        Rational row = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(gram_(i, j)) != 0) row += gram_(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

VectorR QuadraticSpace::functional(std::span<const Rational> x) const {
    if (x.size() != dim()) throw ValidationError("functional: dimension mismatch");
    return gram_ * x;
}

Rational inner_product(const QuadraticSpace& space, std::span<const Rational> x, std::span<const Rational> y) {
    return space.inner_product(x, y);
}

Rational MajorantForm::value(std::span<const Rational> x) const {
    return dot(x, gram * x);
}

MajorantForm build_majorant(const QuadraticSpace& space) {
    VectorR flipped = space.diag();
    for (auto& d : flipped) d = abs(d);
    const MatrixR tinv = inverse(space.diagonalizer());
    return MajorantForm{tinv.transpose() * MatrixR::diagonal(flipped) * tinv};
}

Lattice::Lattice(const QuadraticSpace& space)
    : basis_(MatrixR::identity(space.dim())), mu_(space.dim()) {}

Lattice::Lattice(const QuadraticSpace& space, MatrixR basis, VectorR mu)
    : basis_(std::move(basis)), mu_(std::move(mu)) {
    if (basis_.rows() != space.dim() || basis_.cols() != space.dim())
        throw ValidationError("lattice basis must be a square matrix of the ambient dimension");
    (void)inverse(basis_);  // throws when singular
    if (mu_.empty()) mu_.resize(space.dim());
    if (mu_.size() != space.dim()) throw ValidationError("coset offset has wrong dimension");
}

VectorR Lattice::point(std::span<const long> k) const {
    if (k.size() != rank()) throw ValidationError("lattice point: dimension mismatch");
    VectorR coeff(mu_);
    for (std::size_t i = 0; i < k.size(); ++i) coeff[i] += k[i];
    return basis_ * coeff;
}

MatrixR Lattice::pull_back(const MatrixR& form) const {
    return basis_.transpose() * form * basis_;
}

bool Lattice::mu_in_dual(const QuadraticSpace& space) const {
    const VectorR pairing = pull_back(space.gram()) * mu_;
    for (const auto& p : pairing)
        if (Rational(2 * p).get_den() != 1) return false;
    return true;
}

}  // namespace itheta
