#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "itheta/completion.hpp"
#include "itheta/errors.hpp"
#include "itheta/random.hpp"
#include "itheta/theta_series.hpp"

using namespace itheta;
using fixtures::R;
using fixtures::V;

namespace {

constexpr double kPi = std::numbers::pi;

// Oracle: polar coordinates about the origin. The sign product is constant on the four sectors
// cut out by the lines t·c = 0 and t·c′ = 0; each sector is integrated with composite Simpson in θ and r.
double polar_oracle(std::array<double, 2> c, std::array<double, 2> cp, std::array<double, 2> p) {
    std::vector<double> cuts;
    for (auto v : {c, cp}) {
        const double a = std::atan2(v[1], v[0]);
        for (double t : {a + kPi / 2, a - kPi / 2}) cuts.push_back(std::fmod(t + 4 * kPi, 2 * kPi));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(cuts.front() + 2 * kPi);
    auto simpson = [](auto f, double a, double b, int n) {
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
        return s * h / 3;
    };
    const double rmax = std::hypot(p[0], p[1]) + 7;
    double total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double mid = (cuts[k] + cuts[k + 1]) / 2;
        const double tx = std::cos(mid), ty = std::sin(mid);
        const double sign = ((tx * c[0] + ty * c[1]) > 0 ? 1 : -1) * ((tx * cp[0] + ty * cp[1]) > 0 ? 1 : -1);
        auto radial = [&](double th) {
            const double ux = std::cos(th), uy = std::sin(th);
            return simpson(
                [&](double r) {
                    const double dx = r * ux - p[0], dy = r * uy - p[1];
                    return std::exp(-kPi * (dx * dx + dy * dy)) * r;
                },
                0, rmax, 1200);
        };
        total += sign * simpson(radial, cuts[k], cuts[k + 1], 600);
    }
    return total;
}

// C, C' in the negative coordinate plane at angle phi.
PlaneFrame frame_at_angle(double phi) {
    const auto s = fixtures::space_112();
    const Rational ca = approximate(std::cos(phi), 1000000), sa = approximate(std::sin(phi), 1000000);
    return make_frame(s, V({"1", "0", "0"}), VectorR{ca, sa, Rational(0)});
}

double line_distance(std::array<double, 2> c, std::array<double, 2> p) {
    return std::abs(c[0] * p[0] + c[1] * p[1]) / std::hypot(c[0], c[1]);
}

}  // namespace

TEST_CASE("frames and projection") {
    const auto cfg = fixtures::config_a();
    const auto fr = make_frame(cfg.space(), cfg.vectors()[0], cfg.vectors()[1]);
    const std::vector<double> x = {2.5, -1.25, 7};
    const auto p = project_to_plane(fr, x);
    CHECK(p[0] == doctest::Approx(2.5));
    CHECK(p[1] == doctest::Approx(-1.25));
    const std::vector<double> z = {0, 0, 3};
    CHECK(project_to_plane(fr, z)[0] == 0);
    CHECK(project_to_plane(fr, z)[1] == 0);

    // A tilted pair: residual x - pr_z(x) is orthogonal to f_1, f_2.
    const auto t = fixtures::config_tilted();
    const auto ft = make_frame(t.space(), t.vectors()[0], t.vectors()[1]);
    auto ip = [&](std::span<const double> a, std::span<const double> b) { return -a[0] * b[0] - a[1] * b[1] + a[2] * b[2]; };
    CHECK(ip(ft.f[0], ft.f[0]) == doctest::Approx(-1));
    CHECK(ip(ft.f[1], ft.f[1]) == doctest::Approx(-1));
    CHECK(std::abs(ip(ft.f[0], ft.f[1])) < 1e-14);
    Rng rng(3);
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> y = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const auto pr = projection_vector(ft, y);
        std::vector<double> res(3);
        for (int i = 0; i < 3; ++i) res[i] = y[i] - pr[i];
        CHECK(std::abs(ip(res, ft.f[0])) < 1e-12);
        CHECK(std::abs(ip(res, ft.f[1])) < 1e-12);
    }
}

TEST_CASE("degenerate and dependent pairs are rejected") {
    const auto s = fixtures::space_112();
    CHECK_THROWS_AS(make_frame(s, V({"1", "0", "1"}), V({"0", "1", "0"})), ValidationError);
    CHECK_THROWS_AS(make_frame(s, V({"1", "0", "0"}), V({"2", "0", "0"})), ValidationError);
    CHECK_THROWS_AS(make_frame(s, V({"1", "0", "0"}), V({"0", "0", "1"})), ValidationError);
    ConeConfig nulls(s, {V({"1", "0", "1"}), V({"0", "1", "0"}), V({"-1", "0", "0"})});
    const auto frames = pair_frames(nulls);
    CHECK_FALSE(frames[0].frame);
    CHECK_FALSE(frames[0].problem.empty());
    CHECK(frames[1].frame);
    const std::vector<double> x = {0, 0, 0};
    CHECK_THROWS_AS(completed_weight(frames, 1, x), ValidationError);
}

TEST_CASE("centred values follow 1 - 2 phi / pi") {
    for (double phi : {kPi / 6, kPi / 4, kPi / 2, 2 * kPi / 3}) {
        const auto fr = frame_at_angle(phi);
        const double closed = 1 - 2 * fr.angle() / kPi;
        const auto e = e2_at(fr, {0, 0});
        CHECK(e.value == doctest::Approx(closed).epsilon(1e-6));
        CHECK(std::abs(e.value - closed) < 1e-6);
        CHECK(fr.angle() == doctest::Approx(phi).epsilon(1e-5));
        CHECK(std::abs(polar_oracle(fr.c_coords, fr.c_prime_coords, {0, 0}) - closed) < 1e-6);
    }
    CHECK(std::abs(e2_at(frame_at_angle(kPi / 2), {0, 0}).value) < 1e-12);
}

TEST_CASE("off-centre values match the polar oracle") {
    Rng rng(8);
    for (int k = 0; k < 12; ++k) {
        const auto fr = frame_at_angle(rng.uniform(0.2, 2.9));
        const std::array<double, 2> p = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(std::abs(e2_at(fr, p).value - polar_oracle(fr.c_coords, fr.c_prime_coords, p)) < 1e-7);
    }
}

TEST_CASE("bounds, limits, normalization, symmetry, homogeneity") {
    Rng rng(21);
    const auto s = fixtures::space_112();
    E2Options signless;
    signless.signless = true;
    for (int k = 0; k < 10000; ++k) {
        const auto fr = frame_at_angle(rng.uniform(0.05, 3.1));
        const std::array<double, 2> p = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
        const double v = e2_at(fr, p).value;
        CHECK(std::abs(v) <= 1 + 1e-12);
        if (k % 50 == 0) CHECK(std::abs(e2_at(fr, p, signless).value - 1) < 1e-6);
    }
    // Deep inside a sector the value tends to the sign product.
    for (int k = 0; k < 500; ++k) {
        const auto fr = frame_at_angle(rng.uniform(0.3, 2.8));
        const std::array<double, 2> p = {rng.uniform(-20, 20), rng.uniform(-20, 20)};
        if (line_distance(fr.c_coords, p) < 5 || line_distance(fr.c_prime_coords, p) < 5) continue;
        const double prod = ((p[0] * fr.c_coords[0] + p[1] * fr.c_coords[1]) > 0 ? 1 : -1) *
                            ((p[0] * fr.c_prime_coords[0] + p[1] * fr.c_prime_coords[1]) > 0 ? 1 : -1);
        CHECK(std::abs(e2_at(fr, p).value - prod) < 1e-3);
    }
    // Swapping C, C' and rescaling C by a positive factor.
    const auto t = fixtures::config_tilted();
    const auto& a = t.vectors()[2];
    const auto& b = t.vectors()[3];
    const auto f1 = make_frame(s, a, b);
    const auto f2 = make_frame(s, b, a);
    const auto f3 = make_frame(s, scaled(a, R("7/3")), b);
    for (int k = 0; k < 200; ++k) {
        const std::vector<double> x = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double v = e2_quadrature(f1, x).value;
        CHECK(std::abs(v - e2_quadrature(f2, x).value) < 1e-10);
        CHECK(std::abs(v - e2_quadrature(f3, x).value) < 1e-10);
    }
}

TEST_CASE("completed weights") {
    const auto a = fixtures::config_a();
    const auto frames = pair_frames(a);
    // x = 0: -w_C + Σ (1 - 2φ_j/π).
    double expected = 1;
    for (const auto& pf : frames) expected += 1 - 2 * pf.frame->angle() / kPi;
    const std::vector<double> zero = {0, 0, 0};
    CHECK(completed_weight(frames, -1, zero) == doctest::Approx(expected).epsilon(1e-10));
    // All pairs share one plane, so the E₂ sum is w_C and the weight vanishes identically.
    CHECK(std::abs(expected) < 1e-12);
    Rng rng(4);
    for (int k = 0; k < 200; ++k) {
        const std::vector<double> x = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(std::abs(completed_weight(frames, -1, x)) < 1e-10);
    }

    // Far out in a regular cone the weight approaches Φ(x).
    const auto t = fixtures::config_tilted();
    const auto tf = pair_frames(t);
    const auto ref = reference_weight(t);
    int tested = 0;
    for (int k = 0; k < 4000 && tested < 300; ++k) {
        VectorR x;
        for (int i = 0; i < 3; ++i) x.push_back(Rational(rng.uniform_int(-60, 60)));
        std::vector<double> xd;
        for (const auto& v : x) xd.push_back(v.get_d() * std::numbers::sqrt2);
        bool far = is_regular(t, x);
        for (const auto& pf : tf) {
            const auto p = project_to_plane(*pf.frame, xd);
            far = far && line_distance(pf.frame->c_coords, p) >= 5 && line_distance(pf.frame->c_prime_coords, p) >= 5;
        }
        if (!far) continue;
        ++tested;
        std::vector<double> xr;
        for (const auto& v : x) xr.push_back(v.get_d());
        CHECK(std::abs(completed_weight(tf, ref.w_c, xr) - phi(t, x, ref)) < 1e-3);
    }
    CHECK(tested >= 100);
}

TEST_CASE("completed partial sums for config A") {
    const auto a = fixtures::config_a();
    const auto ref = reference_weight(a);
    const auto res = completed_theta_partial(a, Lattice(a.space()), ref, {0, 1}, R("4"), 1.0);
    CHECK(res.tail_estimate > 0);
    CHECK(res.doubling_ratio < 0.5);
    CHECK(res.points == 1 + 6 + 12 + 8 + 6);
    CHECK_FALSE(res.shells.empty());
    CHECK(res.shells.front().majorant == 0);
    CHECK(res.max_quadrature_error < 1e-9);
}
