#include "itheta/rational.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "itheta/errors.hpp"

namespace itheta {

MatrixR MatrixR::identity(std::size_t n) {
    MatrixR m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

MatrixR MatrixR::diagonal(std::span<const Rational> entries) {
    MatrixR m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

VectorR MatrixR::column(std::size_t c) const {
    VectorR v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

MatrixR MatrixR::transpose() const {
    MatrixR t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

bool MatrixR::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

MatrixR operator*(const MatrixR& a, const MatrixR& b) {
    if (a.cols() != b.rows()) throw ValidationError("matrix product: dimension mismatch");
    MatrixR out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (sgn(a(i, k)) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

VectorR operator*(const MatrixR& a, std::span<const Rational> x) {
    if (a.cols() != x.size()) throw ValidationError("matrix-vector product: dimension mismatch");
    VectorR out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * x[k];
    return out;
}

MatrixR inverse(const MatrixR& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw ValidationError("inverse: matrix is not square");
    MatrixR a = m;
    MatrixR inv = MatrixR::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
        if (pivot == n) throw ValidationError("inverse: matrix is singular");
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Rational p = a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) /= p;
            inv(col, c) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || sgn(a(r, col)) == 0) continue;
            const Rational f = a(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw ValidationError("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

VectorR scaled(std::span<const Rational> x, const Rational& s) {
    VectorR out(x.begin(), x.end());
    for (auto& v : out) v *= s;
    return out;
}

VectorR add(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw ValidationError("add: dimension mismatch");
    VectorR out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

VectorR sub(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw ValidationError("sub: dimension mismatch");
    VectorR out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

bool is_zero(std::span<const Rational> x) {
    for (const auto& v : x)
        if (sgn(v) != 0) return false;
    return true;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    auto valid_int = [](std::string_view t) {
        std::size_t i = 0;
        if (i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
        throw ValidationError("not a rational number: '" + std::string(text) + "'");
    Integer n(num.front() == '+' ? num.substr(1) : num, 10);
    Integer d(den, 10);
    if (d == 0) throw ValidationError("zero denominator: '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(std::span<const Rational> x) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << to_string(x[i]);
    os << ')';
    return os.str();
}

Integer common_denominator(std::span<const Rational> x) {
    Integer d = 1;
    for (const auto& v : x) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
    return d;
}

Rational approximate(double value, long max_den) {
    if (!std::isfinite(value)) throw ValidationError("approximate: non-finite value");
    // Continued-fraction convergents p_k/q_k.
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = value;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        if (std::fabs(a) > 1e15) break;
        const long ai = static_cast<long>(a);
        const long q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        const long p2 = ai * p1 + p0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (q1 == 0) return Rational(static_cast<long>(std::llround(value)));
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

}  // namespace itheta
