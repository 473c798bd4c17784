#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "itheta/cone_geometry.hpp"
#include "itheta/errors.hpp"
#include "itheta/random.hpp"
#include "itheta/signwalk.hpp"

using namespace itheta;
using fixtures::R;
using fixtures::V;

namespace {

// Oracle: sign vectors hit by many random points on the unit sphere.
std::set<std::vector<int>> sampled_sign_vectors(const ConeConfig& config, int samples, std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::vector<int>> out;
    for (int k = 0; k < samples; ++k) {
        VectorR x;
        for (std::size_t i = 0; i < config.dim(); ++i) x.push_back(approximate(rng.normal(), 100000));
        auto s = sign_vector(config, x).signs;
        if (std::find(s.begin(), s.end(), 0) == s.end()) out.insert(s);
    }
    return out;
}

std::set<std::vector<int>> as_set(const EnumerationResult& r) {
    std::set<std::vector<int>> out;
    for (const auto& c : r.components) out.insert(c.signs);
    return out;
}

void check_witnesses(const ConeConfig& config, const EnumerationResult& r) {
    for (const auto& c : r.components) {
        for (std::size_t j = 0; j < config.size(); ++j)
            CHECK(c.signs[j] * config.space().inner_product(c.witness, config.vectors()[j]) >= 1);
        CHECK(c.w_value == w_from_signs(c.signs));
    }
}

// Ratio (x,x)/majorant(x,x) for diag(-1,-1,1) where the majorant is the identity.
double ratio_112(double x1, double x2, double x3) {
    return (x3 * x3 - x1 * x1 - x2 * x2) / (x1 * x1 + x2 * x2 + x3 * x3);
}

}  // namespace

TEST_CASE("config A: six cones, all meeting the negative cone") {
    const auto cfg = fixtures::config_a();
    const auto res = enumerate_components(cfg);
    CHECK(res.complete);
    CHECK(res.components.size() == 6);
    CHECK(as_set(res) == sampled_sign_vectors(cfg, 4000, 1));
    check_witnesses(cfg, res);
    CHECK(std::is_sorted(res.components.begin(), res.components.end(),
                         [](const auto& a, const auto& b) { return a.signs < b.signs; }));
    const auto maj = build_majorant(cfg.space());
    for (auto c : res.components) {
        CHECK(c.w_value == -1);
        classify_component(cfg, maj, c);
        CHECK(c.closure_class == ClosureClass::meets_negative);
        CHECK(c.exact_class);
        CHECK(cfg.space().norm(c.class_witness) < 0);
        CHECK(sign_vector(cfg, c.class_witness).signs == c.signs);
    }
    const auto cert = compute_r_inf(cfg);
    CHECK(cert.vertex_only_cones.empty());
    CHECK_FALSE(cert.finite());
    CHECK_FALSE(cert.note.empty());
}

TEST_CASE("small configurations: orthogonal pair and antipodal pair") {
    const auto s = fixtures::space_112();
    ConeConfig ortho(s, {V({"1", "0", "0"}), V({"0", "1", "0"})});
    CHECK(enumerate_components(ortho).components.size() == 4);
    ConeConfig anti(s, {V({"1", "0", "0"}), V({"-1", "0", "0"})});
    const auto res = enumerate_components(anti);
    REQUIRE(res.components.size() == 2);
    for (const auto& c : res.components) CHECK(c.signs[0] == -c.signs[1]);
    ConeConfig anti3(s, {V({"1", "0", "0"}), V({"-1", "0", "0"}), V({"0", "1", "0"})});
    CHECK(enumerate_components(anti3).components.size() == 4);
}

TEST_CASE("realize_signs agrees with enumeration") {
    const auto cfg = fixtures::config_tilted();
    const auto found = as_set(enumerate_components(cfg));
    const std::size_t n = cfg.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = (mask >> j) & 1 ? 1 : -1;
        auto x = realize_signs(cfg, s);
        CHECK(static_cast<bool>(x) == (found.count(s) == 1));
        if (x) CHECK(sign_vector(cfg, *x).signs == s);
    }
    CHECK_THROWS_AS(realize_signs(cfg, {1, 1}), ValidationError);
}

TEST_CASE("component set does not depend on seeds and matches sampling") {
    const auto cfg = fixtures::config_tilted();
    EnumerationOptions a, b;
    a.seed = 1;
    b.seed = 999;
    const auto ra = enumerate_components(cfg, a);
    const auto rb = enumerate_components(cfg, b);
    CHECK(as_set(ra) == as_set(rb));
    CHECK(as_set(ra) == sampled_sign_vectors(cfg, 60000, 3));
    check_witnesses(cfg, ra);
}

TEST_CASE("budget exhaustion throws or falls back") {
    const auto cfg = fixtures::config_tilted();
    EnumerationOptions opt;
    opt.budget = 3;
    CHECK_THROWS_AS(enumerate_components(cfg, opt), ComputationError);
    opt.random_fallback = true;
    opt.random_samples = 20000;
    const auto res = enumerate_components(cfg, opt);
    CHECK_FALSE(res.complete);
    CHECK(as_set(res).size() <= as_set(enumerate_components(cfg)).size());
    check_witnesses(cfg, res);
}

TEST_CASE("tilted configuration: vertex-only cones and r_inf") {
    const auto cfg = fixtures::config_tilted();
    REQUIRE(check_all(cfg).overall);
    const auto cert = compute_r_inf(cfg);
    REQUIRE_FALSE(cert.vertex_only_cones.empty());
    CHECK(cert.finite());
    CHECK(cert.r_inf > 0);
    CHECK(cert.validation.samples >= 10000);
    CHECK(cert.validation.violations == 0);
    CHECK(cert.validation.min_observed_ratio >= cert.r_inf - 1e-6);

    // Oracle for the all-plus cone: in the chart x3 = 1 it is the octagon {p : p·u_j < 1/2};
    // the infimum of the ratio sits at the vertex farthest from the origin.
    std::vector<std::pair<double, double>> u;
    for (const auto& c : cfg.vectors()) u.emplace_back(c[0].get_d(), c[1].get_d());
    double rho = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        auto [a1, b1] = u[j];
        auto [a2, b2] = u[(j + 1) % u.size()];
        const double det = a1 * b2 - a2 * b1;
        const double px = 0.5 * (b2 - b1) / det;
        const double py = 0.5 * (a1 - a2) / det;
        rho = std::max(rho, std::hypot(px, py));
    }
    const double expected = (1 - rho * rho) / (1 + rho * rho);
    bool found_plus = false;
    for (std::size_t k = 0; k < cert.vertex_only_cones.size(); ++k) {
        const auto& c = cert.vertex_only_cones[k];
        if (std::all_of(c.signs.begin(), c.signs.end(), [](int s) { return s == 1; })) {
            found_plus = true;
            CHECK(cert.per_cone_inf[k] == doctest::Approx(expected).epsilon(1e-9));
            // (x,C_j) > 0 for all j at (0,0,1): w = 8 there, reference is 8 - 4 = 4.
            CHECK(c.w_value == 8);
        }
    }
    CHECK(found_plus);
    CHECK(cert.r_inf <= expected + 1e-12);

    // Oracle for every cone: sphere sampling never dips below the reported infimum,
    // and gets close to it.
    std::map<std::vector<int>, double> per_cone;
    for (std::size_t k = 0; k < cert.vertex_only_cones.size(); ++k)
        per_cone[cert.vertex_only_cones[k].signs] = cert.per_cone_inf[k];
    std::map<std::vector<int>, double> sampled_min;
    Rng rng(77);
    for (int t = 0; t < 200000; ++t) {
        const double x1 = rng.normal(), x2 = rng.normal(), x3 = rng.normal();
        std::vector<int> s;
        for (const auto& c : cfg.vectors()) {
            const double v = -x1 * c[0].get_d() - x2 * c[1].get_d() + x3 * c[2].get_d();
            s.push_back(v > 0 ? 1 : -1);
        }
        auto it = per_cone.find(s);
        if (it == per_cone.end()) continue;
        const double r = ratio_112(x1, x2, x3);
        CHECK(r >= it->second - 1e-9);
        auto [m, inserted] = sampled_min.emplace(s, r);
        if (!inserted) m->second = std::min(m->second, r);
    }
    for (const auto& [s, inf] : per_cone) {
        REQUIRE(sampled_min.count(s));
        CHECK(sampled_min[s] - inf < 0.05);
    }
    // Every non-vertex-only cone carries an exact negative witness here.
    for (const auto& c : cert.components) {
        if (c.closure_class == ClosureClass::meets_negative) {
            CHECK(c.exact_class);
            CHECK(cfg.space().norm(c.class_witness) < 0);
        }
    }
}

TEST_CASE("certificate needs a valid configuration") {
    CHECK_THROWS_AS(compute_r_inf(fixtures::config_b()), ValidationError);
}

TEST_CASE("boundary-touching cone") {
    // Walls x3 ± x1 ± x2 >= 0: the all-plus cone is spanned by the null rays (±1,0,1), (0,±1,1).
    const auto s = fixtures::space_112();
    ConeConfig cfg(s, {V({"1", "1", "1"}), V({"-1", "1", "1"}), V({"-1", "-1", "1"}), V({"1", "-1", "1"})});
    const auto maj = build_majorant(s);
    auto res = enumerate_components(cfg);
    bool seen = false;
    for (auto& c : res.components) {
        classify_component(cfg, maj, c);
        // The all-plus cone and its negative are both spanned by null rays.
        if (std::adjacent_find(c.signs.begin(), c.signs.end(), std::not_equal_to<>()) == c.signs.end()) {
            seen = true;
            CHECK(c.closure_class == ClosureClass::boundary_touch);
            CHECK(std::abs(c.inf_ratio) <= 1e-6);
            REQUIRE(c.exact_class);
            CHECK(cfg.space().norm(c.class_witness) == 0);
            CHECK_FALSE(is_zero(c.class_witness));
        } else {
            CHECK(c.closure_class == ClosureClass::meets_negative);
        }
    }
    CHECK(seen);
}
