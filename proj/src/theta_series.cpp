#include "itheta/theta_series.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "itheta/cone_geometry.hpp"
#include "itheta/digest.hpp"
#include "itheta/errors.hpp"
#include "itheta/parallel.hpp"

namespace itheta {

std::string to_string(Completeness c) {
    switch (c) {
        case Completeness::certified: return "certified";
        case Completeness::doubling_checked: return "doubling-checked";
        case Completeness::heuristic: return "heuristic";
    }
    return "?";
}

long QExpansion::coefficient(const Rational& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? 0 : it->second;
}

namespace {

Eigen::MatrixXd to_eigen(const MatrixR& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
    return out;
}

// Fincke-Pohst walk over y = k + μ with yᵀQy <= bound (floating point, bound already padded).
void ellipsoid_walk(const Eigen::MatrixXd& q, const std::vector<double>& mu, double bound,
                    const std::function<void(const std::vector<long>&, double)>& visit) {
    const int d = static_cast<int>(q.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(q);
    if (llt.info() != Eigen::Success) throw ComputationError("majorant is not positive definite on the lattice");
    const Eigen::MatrixXd r = llt.matrixU();
    std::vector<long> k(d);
    std::vector<double> y(d);
    std::function<void(int, double)> level = [&](int i, double used) {
        if (i < 0) {
            visit(k, used);
            return;
        }
        double c = 0;
        for (int j = i + 1; j < d; ++j) c -= r(i, j) * y[j];
        c /= r(i, i);
        const double rest = bound - used;
        if (rest < 0) return;
        const double half = std::sqrt(rest) / r(i, i);
        const long lo = static_cast<long>(std::ceil(c - half - mu[i]));
        const long hi = static_cast<long>(std::floor(c + half - mu[i]));
        for (long ki = lo; ki <= hi; ++ki) {
            k[i] = ki;
            y[i] = static_cast<double>(ki) + mu[i];
            const double t = r(i, i) * (y[i] - c);
            level(i - 1, used + t * t);
        }
    };
    level(d - 1, 0.0);
}

std::vector<double> mu_double(const VectorR& mu) {
    std::vector<double> out;
    for (const auto& v : mu) out.push_back(v.get_d());
    return out;
}

// Exact quadratic forms on y = k + μ through integer numerators.
class CosetForms {
public:
    CosetForms(const MatrixR& q, const MatrixR& g, const VectorR& mu) : d_(mu.size()) {
        den_ = common_denominator(mu);
        for (const auto& v : mu) mu_num_.push_back(Integer(v * den_));
        auto scale = [&](const MatrixR& m, std::vector<Integer>& out, Integer& s) {
            std::vector<Rational> flat;
            for (std::size_t i = 0; i < d_; ++i)
                for (std::size_t j = 0; j < d_; ++j) flat.push_back(m(i, j));
            s = common_denominator(flat);
            for (const auto& v : flat) out.push_back(Integer(v * s));
        };
        scale(q, q_, q_scale_);
        scale(g, g_, g_scale_);
    }

    std::vector<Integer> numerator(std::span<const long> k) const {
        std::vector<Integer> n(d_);
        for (std::size_t i = 0; i < d_; ++i) n[i] = den_ * k[i] + mu_num_[i];
        return n;
    }
    Rational majorant(const std::vector<Integer>& n) const { return eval(q_, q_scale_, n); }
    Rational norm(const std::vector<Integer>& n) const { return eval(g_, g_scale_, n); }

private:
    Rational eval(const std::vector<Integer>& m, const Integer& s, const std::vector<Integer>& n) const {
        Integer acc = 0;
        for (std::size_t i = 0; i < d_; ++i) {
            if (n[i] == 0) continue;
            Integer row = 0;
            for (std::size_t j = 0; j < d_; ++j) row += m[i * d_ + j] * n[j];
            acc += row * n[i];
        }
        Rational out(acc, Integer(s * den_ * den_));
        out.canonicalize();
        return out;
    }

    std::size_t d_;
    Integer den_;
    std::vector<Integer> mu_num_;
    std::vector<Integer> q_, g_;
    Integer q_scale_, g_scale_;
};

// w at lattice points through integer ambient numerators, with an exact rational fallback.
class PointWeigher {
public:
    PointWeigher(const ConeConfig& config, const Lattice& lattice)
        : config_(config), lattice_(lattice), kernel_(config) {
        const auto& b = lattice.basis();
        mu_den_ = common_denominator(lattice.mu());
        for (const auto& v : lattice.mu()) mu_num_.push_back(Integer(v * mu_den_));
        std::vector<Rational> flat;
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) flat.push_back(b(i, j));
        const Integer s = common_denominator(flat);
        for (const auto& v : flat) basis_.push_back(Integer(v * s));
    }

    // Positive multiple of B(k + μ) as int64 numerators; false when it does not fit.
    bool ambient(std::span<const long> k, std::vector<std::int64_t>& out) const {
        const std::size_t rows = lattice_.basis().rows(), cols = lattice_.basis().cols();
        out.assign(rows, 0);
        for (std::size_t i = 0; i < rows; ++i) {
            Integer acc = 0;
            for (std::size_t j = 0; j < cols; ++j) acc += basis_[i * cols + j] * (mu_den_ * k[j] + mu_num_[j]);
            if (!acc.fits_slong_p()) return false;
            out[i] = acc.get_si();
        }
        return true;
    }

    int w(std::span<const long> k) const {
        std::vector<std::int64_t> num;
        if (ambient(k, num)) return kernel_.w(num);
        return evaluate_w(config_, lattice_.point(k));
    }

    // Sign of (x,x); second = w.
    std::pair<int, int> norm_sign_and_w(std::span<const long> k) const {
        std::vector<std::int64_t> num;
        if (ambient(k, num)) return {sgn(kernel_.norm_numerator(num)), kernel_.w(num)};
        const VectorR x = lattice_.point(k);
        return {sgn(config_.space().norm(x)), evaluate_w(config_, x)};
    }

private:
    const ConeConfig& config_;
    const Lattice& lattice_;
    SignKernel kernel_;
    Integer mu_den_;
    std::vector<Integer> mu_num_;
    std::vector<Integer> basis_;
};

std::vector<int> weigh_all(const ConeConfig& config, const Lattice& lattice, const std::vector<LatticePoint>& pts,
                           int w_c) {
    const PointWeigher weigher(config, lattice);
    std::vector<int> phis(pts.size());
    parallel_for(pts.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) phis[i] = weigher.w(pts[i].k) - w_c;
    });
    return phis;
}

// Upper bound on #{y ∈ μ+Z^d : yᵀQy <= t} from the box |y_i| <= sqrt(t·(Q^{-1})_ii).
double box_count(const Eigen::VectorXd& qinv_diag, double t) {
    double count = 1;
    for (Eigen::Index i = 0; i < qinv_diag.size(); ++i) count *= 2 * std::sqrt(t * qinv_diag(i)) + 1;
    return count;
}

}  // namespace

std::vector<LatticePoint> enumerate_lattice_points(const QuadraticSpace& space, const Lattice& lattice,
                                                   const MajorantForm& majorant, const Rational& bound) {
    if (sgn(bound) <= 0) throw ValidationError("enumeration bound must be positive");
    const MatrixR q = lattice.pull_back(majorant.gram);
    const MatrixR g = lattice.pull_back(space.gram());
    const CosetForms forms(q, g, lattice.mu());
    const double padded = bound.get_d() * (1 + 1e-9) + 1e-9;
    std::vector<LatticePoint> out;
    ellipsoid_walk(to_eigen(q), mu_double(lattice.mu()), padded, [&](const std::vector<long>& k, double) {
        const auto n = forms.numerator(k);
        Rational maj = forms.majorant(n);
        if (maj > bound) return;
        LatticePoint p;
        p.k = k;
        p.x = lattice.point(k);
        p.norm = forms.norm(n);
        p.majorant = std::move(maj);
        out.push_back(std::move(p));
    });
    std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
        if (a.majorant != b.majorant) return a.majorant < b.majorant;
        return a.k < b.k;
    });
    return out;
}

double theta_tail_bound(const MatrixR& lattice_majorant, const VectorR& mu, std::size_t n_vectors, double v, double r,
                        const Rational& bound) {
    if (!(v > 0)) throw ValidationError("Im(tau) must be positive");
    if (!(r > 0)) throw ValidationError("tail bound needs a positive ratio bound");
    if (std::isinf(r)) return 0.0;
    const double a = std::numbers::pi * v * r / 2;
    const double b = bound.get_d();
    const Eigen::MatrixXd q = to_eigen(lattice_majorant);
    const Eigen::VectorXd qinv_diag = q.inverse().diagonal();
    const double prefactor = 2.0 * static_cast<double>(n_vectors);

    // Σ_{maj > start} e^{-a maj} <= Σ_s count(maj <= start·2^{s+1}) e^{-a start 2^s}.
    auto dyadic = [&](double start) {
        double total = 0;
        double t = std::max(start, 1e-3);
        for (int s = 0; s < 200; ++s, t *= 2) {
            const double term = box_count(qinv_diag, 2 * t) * std::exp(-a * t);
            total += term;
            if (term < 1e-300 || (s > 4 && term < 1e-18 * total)) break;
        }
        return total;
    };

    const double window = b + 80.0 / a;
    if (box_count(qinv_diag, window) > 4e6) return prefactor * dyadic(b);
    double explicit_sum = 0;
    const double slack = 1e-9 * (1 + b);
    const CosetForms forms(lattice_majorant, lattice_majorant, mu);
    ellipsoid_walk(q, mu_double(mu), window * (1 + 1e-9), [&](const std::vector<long>& k, double maj) {
        if (maj < b - slack) return;
        // Points on the bound itself belong to the partial sum, not the tail.
        if (maj <= b + slack && forms.majorant(forms.numerator(k)) <= bound) return;
        explicit_sum += std::exp(-a * maj);
    });
    return prefactor * (explicit_sum + dyadic(window));
}

QExpansion theta_coefficients(const ConeConfig& config, const Lattice& lattice, const Rational& truncation,
                              const ThetaOptions& options) {
    if (lattice.basis().rows() != config.dim()) throw ValidationError("lattice and configuration dimensions differ");
    QExpansion e;
    e.truncation = truncation;
    e.n_vectors = config.size();
    e.config_digest = input_digest(config, &lattice);
    e.mu = lattice.mu();
    const MajorantForm majorant = build_majorant(config.space());
    e.lattice_majorant = lattice.pull_back(majorant.gram);

    const bool valid = check_all(config).overall;
    const ReferenceWeight ref = options.reference ? *options.reference : reference_weight(config);
    e.w_c = ref.w_c;
    if (options.r_inf) {
        e.r_inf = *options.r_inf;
    } else if (valid) {
        e.r_inf = compute_r_inf(config).r_inf;
    } else {
        e.warnings.push_back("configuration fails (I.1)-(I.3): no convergence certificate, the series diverges");
    }
    if (!lattice.mu_in_dual(config.space()))
        e.warnings.push_back("mu does not follow the dual-lattice pattern 2(mu, L) in Z");

    const bool finite_r = std::isfinite(e.r_inf) && e.r_inf > 0;
    Rational bound;
    if (options.bound) {
        bound = *options.bound;
    } else {
        const double r = finite_r ? e.r_inf : 1.0;
        bound = Rational(static_cast<long>(std::ceil(2 * truncation.get_d() / r))) + 1;
    }

    struct Pass {
        std::map<Rational, long> coeffs, beyond;
        std::size_t points = 0;
        double r_support = std::numeric_limits<double>::infinity();
    };
    auto run = [&](const Rational& b) {
        Pass p;
        const auto pts = enumerate_lattice_points(config.space(), lattice, majorant, b);
        const auto phis = weigh_all(config, lattice, pts, ref.w_c);
        p.points = pts.size();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (phis[i] == 0) continue;
            if (sgn(pts[i].majorant) > 0)
                p.r_support = std::min(p.r_support, pts[i].norm.get_d() / pts[i].majorant.get_d());
            const Rational m = pts[i].norm / 2;
            if (m <= truncation) p.coeffs[m] += phis[i];
            else p.beyond[m] += std::abs(phis[i]);
        }
        std::erase_if(p.coeffs, [](const auto& kv) { return kv.second == 0; });
        return p;
    };

    // The origin lies in μ+L exactly when μ is integral; it contributes Φ(0) = -w_C to c(0).
    const bool has_origin = std::all_of(lattice.mu().begin(), lattice.mu().end(),
                                        [](const Rational& v) { return v.get_den() == 1; });
    e.origin_term = has_origin ? -ref.w_c : 0;

    Pass first = run(bound);
    e.bound = bound;
    e.points = first.points;
    e.r_support = first.r_support;
    const bool certified = finite_r && e.r_inf * bound.get_d() >= 2 * truncation.get_d() &&
                           e.r_support >= e.r_inf - options.support_tolerance;
    if (certified) {
        e.completeness = Completeness::certified;
    } else if (options.doubling_check) {
        Pass second = run(2 * bound);
        e.completeness = second.coeffs == first.coeffs ? Completeness::doubling_checked : Completeness::heuristic;
        if (e.completeness == Completeness::heuristic) {
            first = std::move(second);
            e.bound = 2 * bound;
            e.points = first.points;
            e.r_support = first.r_support;
        }
    }
    e.coeffs = std::move(first.coeffs);
    e.beyond_abs = std::move(first.beyond);
    for (const auto& [m, c] : e.coeffs)
        if (sgn(m) < 0 || (sgn(m) == 0 && c != e.origin_term)) e.vanishing_violations.push_back(m);
    if (e.origin_term != 0 && e.coefficient(0) == 0) e.vanishing_violations.push_back(0);
    return e;
}

ThetaValue theta_evaluate(const QExpansion& expansion, std::complex<double> tau) {
    if (!(tau.imag() > 0)) throw ValidationError("Im(tau) must be positive");
    using namespace std::complex_literals;
    ThetaValue out{0.0, std::nullopt};
    for (const auto& [m, c] : expansion.coeffs)
        out.value += static_cast<double>(c) * std::exp(2.0 * std::numbers::pi * 1i * tau * m.get_d());
    if (expansion.completeness == Completeness::certified) {
        double known = 0;
        for (const auto& [m, c] : expansion.beyond_abs)
            known += static_cast<double>(c) * std::exp(-2.0 * std::numbers::pi * tau.imag() * m.get_d());
        out.tail_bound = known + theta_tail_bound(expansion.lattice_majorant, expansion.mu, expansion.n_vectors,
                                                  tau.imag(), expansion.r_inf, expansion.bound);
    }
    return out;
}

std::complex<double> theta_partial_sum(const ConeConfig& config, const Lattice& lattice, const ReferenceWeight& reference,
                                       std::complex<double> tau, const Rational& bound) {
    if (!(tau.imag() > 0)) throw ValidationError("Im(tau) must be positive");
    using namespace std::complex_literals;
    const auto pts = enumerate_lattice_points(config.space(), lattice, build_majorant(config.space()), bound);
    const auto phis = weigh_all(config, lattice, pts, reference.w_c);
    std::complex<double> sum = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (phis[i] != 0) sum += static_cast<double>(phis[i]) * std::exp(std::numbers::pi * 1i * tau * pts[i].norm.get_d());
    return sum;
}

ReferenceWeight reference_at(const ConeConfig& config, std::span<const Rational> v) {
    if (v.size() != config.dim()) throw ValidationError("reference vector has the wrong dimension");
    if (sgn(config.space().norm(v)) >= 0) throw ValidationError("reference vector must have negative norm");
    if (!is_regular(config, v)) throw ValidationError("reference vector lies on a wall");
    ReferenceWeight ref;
    ref.w_c = evaluate_w(config, v);
    ref.witness.assign(v.begin(), v.end());
    return ref;
}

std::vector<DivergenceWitness> divergence_witness_scan(const ConeConfig& config, const Lattice& lattice, long radius,
                                                       const std::optional<ReferenceWeight>& reference) {
    if (radius < 0) throw ValidationError("scan radius must be non-negative");
    const auto report = check_all(config);
    for (const auto& v : report.violations)
        if (v.condition == Condition::I1 || v.condition == Condition::I2)
            throw ValidationError("divergence scan requires (I.1) and (I.2); " + to_string(v.condition) +
                                  " fails at j=" + std::to_string(v.j));
    if (!reference && !report.overall)
        throw ValidationError("configuration fails (I.3): supply an explicit reference weight");
    const int w_c = reference ? reference->w_c : reference_weight(config).w_c;

    const std::size_t d = lattice.rank();
    const std::size_t side = static_cast<std::size_t>(2 * radius + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > 100'000'000 / side) throw ValidationError("scan box too large");
        total *= side;
    }
    const PointWeigher weigher(config, lattice);
    auto coords = [&](std::size_t idx) {
        std::vector<long> k(d);
        for (std::size_t i = d; i-- > 0;) {
            k[i] = static_cast<long>(idx % side) - radius;
            idx /= side;
        }
        return k;
    };
    std::vector<int> phis(total, 0);
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const auto k = coords(idx);
            const auto [ns, w] = weigher.norm_sign_and_w(k);
            if (ns < 0) phis[idx] = w - w_c;
        }
    });
    std::vector<DivergenceWitness> out;
    for (std::size_t idx = 0; idx < total; ++idx) {
        if (phis[idx] == 0) continue;
        DivergenceWitness wit;
        wit.k = coords(idx);
        wit.x = lattice.point(wit.k);
        wit.norm = config.space().norm(wit.x);
        wit.phi = phis[idx];
        out.push_back(std::move(wit));
    }
    return out;
}

}  // namespace itheta
