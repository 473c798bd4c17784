#include "doctest.h"

#include "fixtures.hpp"
#include "itheta/errors.hpp"
#include "itheta/quadratic_space.hpp"
#include "itheta/random.hpp"

using namespace itheta;
using fixtures::R;
using fixtures::V;

namespace {

// Oracle: plain triple loop xᵀ·G·y, independent of QuadraticSpace::inner_product.
Rational naive_form(const MatrixR& g, const VectorR& x, const VectorR& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * g(i, j) * y[j];
    return s;
}

// Oracle: characteristic polynomial by Faddeev-LeVerrier; for a real symmetric matrix
// all roots are real, so Descartes' rule counts positive and negative eigenvalues exactly.
std::vector<Rational> char_poly(const MatrixR& a) {
    const std::size_t n = a.rows();
    std::vector<Rational> c(n + 1);  // c[k] multiplies λ^(n-k)
    c[0] = 1;
    MatrixR m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        MatrixR mk = a * m;
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[k - 1];
        m = mk;
        MatrixR am = a * m;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[k] = -tr / Rational(static_cast<long>(k));
    }
    return c;
}

std::size_t sign_changes(const std::vector<Rational>& coeffs) {
    std::size_t changes = 0;
    int last = 0;
    for (const auto& q : coeffs) {
        const int s = sgn(q);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

std::pair<std::size_t, std::size_t> descartes_signature(const MatrixR& g) {
    auto c = char_poly(g);
    const std::size_t pos = sign_changes(c);
    const std::size_t n = c.size() - 1;
    for (std::size_t k = 0; k <= n; ++k)
        if ((n - k) % 2 == 1) c[k] = -c[k];
    return {pos, sign_changes(c)};
}

MatrixR random_invertible(Rng& rng, std::size_t n) {
    for (;;) {
        MatrixR s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = rng.rational(3, 4);
        try {
            (void)inverse(s);
            return s;
        } catch (const ValidationError&) {
        }
    }
}

MatrixR full_gram_12() {
    // Signature (1,2), no zero entries.
    MatrixR g(3, 3);
    const long e[3][3] = {{1, 2, 3}, {2, 1, 4}, {3, 4, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = e[i][j];
    return g;
}

}  // namespace

TEST_CASE("inner_product on diag(-1,-1,1)") {
    const auto space = fixtures::space_112();
    CHECK(inner_product(space, V({"1", "0", "0"}), V({"1", "0", "0"})) == -1);
    CHECK(inner_product(space, V({"1", "0", "1"}), V({"1", "0", "1"})) == 0);
    const auto x = V({"2", "1", "0"});
    const auto y = V({"-4/5", "-3/5", "0"});
    CHECK(inner_product(space, x, y) == R("11/5"));
    CHECK(inner_product(space, x, y) == naive_form(space.gram(), x, y));
    CHECK_THROWS_AS(inner_product(space, V({"1", "0"}), x), ValidationError);
}

TEST_CASE("inner_product is symmetric and matches the naive oracle") {
    const QuadraticSpace space(full_gram_12());
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        VectorR x(3), y(3);
        for (auto& v : x) v = rng.rational(5, 7);
        for (auto& v : y) v = rng.rational(5, 11);
        CHECK(space.inner_product(x, y) == space.inner_product(y, x));
        CHECK(space.inner_product(x, y) == naive_form(space.gram(), x, y));
    }
}

TEST_CASE("certify_signature") {
    SUBCASE("diagonal") {
        const auto cert = certify_signature(fixtures::diag({-1, -1, 1}));
        CHECK(cert.n_pos == 1);
        CHECK(cert.n_neg == 2);
        CHECK(cert.diagonalizer == MatrixR::identity(3));
    }
    SUBCASE("positive definite is rejected in an (n,2) context") {
        CHECK(certify_signature(fixtures::diag({1, 1, 1})).n_neg == 0);
        CHECK_THROWS_AS(QuadraticSpace(fixtures::diag({1, 1, 1})), ValidationError);
    }
    SUBCASE("hyperbolic plane needs the zero-pivot fix") {
        MatrixR h(2, 2);
        h(0, 1) = 1;
        h(1, 0) = 1;
        const auto cert = certify_signature(h);
        CHECK(cert.n_pos == 1);
        CHECK(cert.n_neg == 1);
        CHECK(descartes_signature(h) == std::pair<std::size_t, std::size_t>{1, 1});
        const MatrixR d = cert.diagonalizer.transpose() * h * cert.diagonalizer;
        CHECK(d == MatrixR::diagonal(cert.diag));
    }
    SUBCASE("degenerate") {
        CHECK_THROWS_AS(certify_signature(fixtures::diag({-1, 0, 1})), ValidationError);
        MatrixR g(3, 3);
        g(0, 0) = 1; g(0, 1) = 1; g(1, 0) = 1; g(1, 1) = 1; g(2, 2) = -1;
        CHECK_THROWS_AS(certify_signature(g), ValidationError);
    }
    SUBCASE("non-symmetric") {
        MatrixR g = fixtures::diag({-1, -1, 1});
        g(0, 1) = 1;
        CHECK_THROWS_AS(certify_signature(g), ValidationError);
    }
    SUBCASE("full Gram agrees with the characteristic polynomial") {
        const auto g = full_gram_12();
        const auto cert = certify_signature(g);
        CHECK(std::pair{cert.n_pos, cert.n_neg} == descartes_signature(g));
        CHECK(cert.diagonalizer.transpose() * g * cert.diagonalizer == MatrixR::diagonal(cert.diag));
    }
}

TEST_CASE("certify_signature is congruence invariant") {
    Rng rng(11);
    const MatrixR grams[] = {fixtures::diag({-1, -1, 1}), full_gram_12(), fixtures::diag({-2, 3, -5, 7})};
    for (const auto& g : grams) {
        const auto base = certify_signature(g);
        for (int k = 0; k < 20; ++k) {
            const MatrixR s = random_invertible(rng, g.rows());
            const MatrixR moved = s.transpose() * g * s;
            const auto cert = certify_signature(moved);
            CHECK(cert.n_pos == base.n_pos);
            CHECK(cert.n_neg == base.n_neg);
            CHECK(cert.diagonalizer.transpose() * moved * cert.diagonalizer == MatrixR::diagonal(cert.diag));
        }
    }
}

TEST_CASE("build_majorant") {
    CHECK(build_majorant(fixtures::space_112()).gram == fixtures::diag({1, 1, 1}));
    CHECK(build_majorant(QuadraticSpace(fixtures::diag({-2, -1, 3}))).gram == fixtures::diag({2, 1, 3}));

    const QuadraticSpace space(full_gram_12());
    const auto maj = build_majorant(space);
    CHECK(maj.gram.is_symmetric());
    CHECK(certify_signature(maj.gram).n_neg == 0);
    Rng rng(3);
    for (int k = 0; k < 10000; ++k) {
        VectorR x(3);
        for (auto& v : x) v = rng.rational(4, 13);
        if (is_zero(x)) continue;
        const Rational m = maj.value(x);
        REQUIRE(sgn(m) > 0);
        REQUIRE(m >= abs(space.norm(x)));
    }
    // On the positive directions of the diagonalized form the majorant equals the form.
    for (std::size_t i = 0; i < space.dim_pos(); ++i) {
        const VectorR p = scaled(space.positive_direction(i), R("3/7"));
        CHECK(maj.value(p) == space.norm(p));
    }
}

TEST_CASE("lattice coset points and pull-back") {
    const auto space = fixtures::space_112();
    const Lattice std_lattice(space);
    const long k[3] = {1, -2, 3};
    CHECK(std_lattice.point(k) == V({"1", "-2", "3"}));
    MatrixR basis = fixtures::diag({1, 1, 2});
    basis(0, 1) = 1;
    const Lattice lat(space, basis, V({"0", "0", "1/2"}));
    CHECK(lat.point(k) == V({"-1", "-2", "7"}));
    CHECK(lat.pull_back(space.gram())(2, 2) == 4);
    CHECK_THROWS_AS(Lattice(space, fixtures::diag({1, 0, 1}), VectorR{}), ValidationError);
    CHECK(Lattice(space, MatrixR::identity(3), V({"0", "0", "1/2"})).mu_in_dual(space));
    CHECK_FALSE(Lattice(space, MatrixR::identity(3), V({"0", "0", "1/3"})).mu_in_dual(space));
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("6/4") == R("3/2"));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("+7")) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("0.5"), ValidationError);
    CHECK_THROWS_AS(parse_rational("1/-2"), ValidationError);
    CHECK(approximate(0.75, 100) == R("3/4"));
}
