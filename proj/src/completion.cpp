#include "itheta/completion.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "itheta/errors.hpp"
#include "itheta/parallel.hpp"
#include "itheta/theta_series.hpp"

namespace itheta {

namespace {

double form(const std::vector<double>& g, std::size_t d, std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) {
        double row = 0;
        for (std::size_t j = 0; j < d; ++j) row += g[i * d + j] * b[j];
        s += a[i] * row;
    }
    return s;
}

std::vector<double> to_double(std::span<const Rational> v) {
    std::vector<double> out;
    for (const auto& q : v) out.push_back(q.get_d());
    return out;
}

// Interval halving with an absolute tolerance that halves with the interval, so the
// rounding floor of each panel stays below its share.
template <class F>
double adaptive(const F& f, double a, double b, double tol, unsigned depth, double& error) {
    double e = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
    e *= (b - a) / 2;  // the single-panel estimate is reported on [-1, 1]
    if (e <= tol || depth == 0) {
        error += e;
        return v;
    }
    const double mid = (a + b) / 2;
    return adaptive(f, a, mid, tol / 2, depth - 1, error) + adaptive(f, mid, b, tol / 2, depth - 1, error);
}

}  // namespace

double PlaneFrame::angle() const {
    const double dotp = c_coords[0] * c_prime_coords[0] + c_coords[1] * c_prime_coords[1];
    const double n = std::hypot(c_coords[0], c_coords[1]) * std::hypot(c_prime_coords[0], c_prime_coords[1]);
    return std::acos(std::clamp(dotp / n, -1.0, 1.0));
}

PlaneFrame make_frame(const QuadraticSpace& space, std::span<const Rational> c, std::span<const Rational> c_prime) {
    const Rational a = space.norm(c);
    const Rational b = space.inner_product(c, c_prime);
    const Rational d = space.norm(c_prime);
    const Rational det = a * d - b * b;
    bool dependent = true;
    for (std::size_t i = 0; i < c.size() && dependent; ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (c[i] * c_prime[j] != c[j] * c_prime[i]) {
                dependent = false;
                break;
            }
    if (dependent) throw ValidationError("E2 undefined: C and C' are linearly dependent");
    if (!(sgn(a) < 0 && sgn(det) > 0))
        throw ValidationError("E2 undefined: degenerate plane (span of C, C' is not negative definite; Gram det " +
                              to_string(det) + ")");
    PlaneFrame fr;
    fr.c.assign(c.begin(), c.end());
    fr.c_prime.assign(c_prime.begin(), c_prime.end());
    fr.dim = space.dim();
    const auto& g = space.gram();
    for (std::size_t i = 0; i < fr.dim; ++i)
        for (std::size_t j = 0; j < fr.dim; ++j) fr.gram.push_back(g(i, j).get_d());

    const auto cd = to_double(c);
    const auto cpd = to_double(c_prime);
    std::vector<double> f1 = cd;
    const double s1 = std::sqrt(-form(fr.gram, fr.dim, cd, cd));
    for (auto& v : f1) v /= s1;
    std::vector<double> u = cpd;
    const double k = form(fr.gram, fr.dim, cpd, f1);
    for (std::size_t i = 0; i < fr.dim; ++i) u[i] += k * f1[i];
    const double s2 = std::sqrt(-form(fr.gram, fr.dim, u, u));
    for (auto& v : u) v /= s2;
    fr.f = {f1, u};
    fr.c_coords = project_to_plane(fr, cd);
    fr.c_prime_coords = project_to_plane(fr, cpd);
    return fr;
}

std::array<double, 2> project_to_plane(const PlaneFrame& frame, std::span<const double> x) {
    if (x.size() != frame.dim) throw ValidationError("vector has the wrong dimension");
    return {-form(frame.gram, frame.dim, x, frame.f[0]), -form(frame.gram, frame.dim, x, frame.f[1])};
}

std::vector<double> projection_vector(const PlaneFrame& frame, std::span<const double> x) {
    const auto p = project_to_plane(frame, x);
    std::vector<double> out(frame.dim);
    for (std::size_t i = 0; i < frame.dim; ++i) out[i] = p[0] * frame.f[0][i] + p[1] * frame.f[1][i];
    return out;
}

E2Result e2_at(const PlaneFrame& frame, std::array<double, 2> p, const E2Options& options) {
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const auto [c0, c1] = frame.c_coords;
    const double cn = std::hypot(c0, c1);
    const double ch[2] = {c0 / cn, c1 / cn};
    const double cp[2] = {-ch[1], ch[0]};
    const double alpha = ch[0] * frame.c_prime_coords[0] + ch[1] * frame.c_prime_coords[1];
    const double beta = cp[0] * frame.c_prime_coords[0] + cp[1] * frame.c_prime_coords[1];
    const double pu = ch[0] * p[0] + ch[1] * p[1];
    const double ps = cp[0] * p[0] + cp[1] * p[1];
    const double gamma = alpha / beta;

    // t = u·ĉ + s·ĉ⊥: sgn(t·c) = sgn(u), sgn(t·c′) = sgn(β)·sgn(s + γu); the s-integral is an erf.
    auto f = [&](double u) {
        const double g = std::exp(-std::numbers::pi * (u - pu) * (u - pu));
        if (options.signless) return g;
        return g * (u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0)) * std::erf(sqrt_pi * (ps + gamma * u));
    };
    const double lo = pu - options.radius, hi = pu + options.radius;
    std::vector<double> cuts = {lo, hi};
    if (!options.signless) {
        cuts.push_back(0.0);
        if (std::isfinite(-ps / gamma)) cuts.push_back(-ps / gamma);
    }
    std::sort(cuts.begin(), cuts.end());
    E2Result out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], lo), b = std::min(cuts[i + 1], hi);
        if (!(b > a)) continue;
        out.value += adaptive(f, a, b, options.tolerance * (b - a) / (hi - lo), options.max_depth, out.error);
    }
    if (!options.signless && beta < 0) out.value = -out.value;
    if (out.error > std::max(1e-9, 100 * options.tolerance))
        throw ComputationError("E2 quadrature did not reach the requested tolerance (error estimate " +
                               std::to_string(out.error) + ")");
    return out;
}

E2Result e2_quadrature(const PlaneFrame& frame, std::span<const double> x, const E2Options& options) {
    return e2_at(frame, project_to_plane(frame, x), options);
}

std::vector<PairFrame> pair_frames(const ConeConfig& config) {
    std::vector<PairFrame> out;
    for (std::size_t j = 0; j < config.size(); ++j) {
        PairFrame pf;
        pf.j = j + 1;
        try {
            pf.frame = make_frame(config.space(), config.at(static_cast<long>(j)), config.at(static_cast<long>(j) + 1));
        } catch (const ValidationError& e) {
            pf.problem = e.what();
        }
        out.push_back(std::move(pf));
    }
    return out;
}

double completed_weight(const std::vector<PairFrame>& frames, int w_c, std::span<const double> x,
                        const E2Options& options) {
    std::vector<double> scaled_x(x.begin(), x.end());
    for (auto& v : scaled_x) v *= std::numbers::sqrt2;
    double sum = -static_cast<double>(w_c);
    for (const auto& pf : frames) {
        if (!pf.frame) throw ValidationError("pair " + std::to_string(pf.j) + ": " + pf.problem);
        sum += e2_quadrature(*pf.frame, scaled_x, options).value;
    }
    return sum;
}

CompletedTheta completed_theta_partial(const ConeConfig& config, const Lattice& lattice, const ReferenceWeight& reference,
                                       std::complex<double> tau, const Rational& bound, double ratio_bound,
                                       const E2Options& options) {
    if (!(tau.imag() > 0)) throw ValidationError("Im(tau) must be positive");
    const auto frames = pair_frames(config);
    for (const auto& pf : frames)
        if (!pf.frame) throw ValidationError("pair " + std::to_string(pf.j) + ": " + pf.problem);

    const MajorantForm majorant = build_majorant(config.space());
    const auto pts = enumerate_lattice_points(config.space(), lattice, majorant, 2 * bound);
    std::vector<std::complex<double>> terms(pts.size());
    std::vector<double> errors(pts.size(), 0.0);
    using namespace std::complex_literals;
    parallel_for(pts.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = to_double(pts[i].x);
            std::vector<double> sx = x;
            for (auto& v : sx) v *= std::numbers::sqrt2;
            double weight = -static_cast<double>(reference.w_c);
            for (const auto& pf : frames) {
                const auto r = e2_quadrature(*pf.frame, sx, options);
                weight += r.value;
                errors[i] += r.error;
            }
            terms[i] = weight * std::exp(std::numbers::pi * 1i * tau * pts[i].norm.get_d());
        }
    });

    CompletedTheta out;
    out.ratio_bound = ratio_bound;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out.max_quadrature_error = std::max(out.max_quadrature_error, errors[i]);
        out.value_doubled += terms[i];
        if (pts[i].majorant > bound) continue;
        out.value += terms[i];
        ++out.points;
        if (out.shells.empty() || out.shells.back().majorant != pts[i].majorant)
            out.shells.push_back(ShellTerm{pts[i].majorant, 0, 0.0});
        ++out.shells.back().points;
        out.shells.back().abs_sum += std::abs(terms[i]);
    }
    out.tail_estimate = theta_tail_bound(lattice.pull_back(majorant.gram), lattice.mu(), config.size(), tau.imag(),
                                         ratio_bound, bound);
    out.doubling_ratio = out.tail_estimate > 0 ? std::abs(out.value_doubled - out.value) / out.tail_estimate
                                               : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace itheta
