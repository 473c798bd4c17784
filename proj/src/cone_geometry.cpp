#include "itheta/cone_geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "itheta/errors.hpp"
#include "itheta/exact_lp.hpp"
#include "itheta/random.hpp"
#include "itheta/signwalk.hpp"

namespace itheta {

std::string to_string(ClosureClass c) {
    switch (c) {
        case ClosureClass::meets_negative: return "meets_V<0";
        case ClosureClass::boundary_touch: return "boundary_touch";
        case ClosureClass::vertex_only: return "vertex_only";
    }
    return "?";
}

namespace {

std::vector<VectorR> wall_rows(const ConeConfig& config) {
    std::vector<VectorR> rows;
    for (const auto& c : config.vectors()) rows.push_back(config.space().functional(c));
    return rows;
}

std::optional<VectorR> realize_prefix(const std::vector<VectorR>& rows, const std::vector<int>& signs) {
    std::vector<VectorR> a;
    for (std::size_t j = 0; j < signs.size(); ++j) a.push_back(scaled(rows[j], Rational(signs[j])));
    const VectorR rhs(signs.size(), Rational(1));
    return solve_feasibility(a, rhs);
}

struct TreeSearch {
    const std::vector<VectorR>& rows;
    std::size_t budget;
    std::size_t lp_solves = 0;
    std::vector<SignComponent> out;

    void run(std::vector<int>& prefix, const VectorR& witness) {
        const std::size_t k = prefix.size();
        if (k == rows.size()) {
            SignComponent c;
            c.signs = prefix;
            c.witness = witness;
            c.w_value = w_from_signs(prefix);
            out.push_back(std::move(c));
            return;
        }
        const Rational val = dot(rows[k], witness);
        for (int s : {-1, 1}) {
            prefix.push_back(s);
            if (sgn(val) == s) {
                // The current witness already has the right sign; rescale so s·(x,C_k) >= 1.
                const Rational margin = s * val;
                run(prefix, margin < 1 ? scaled(witness, 1 / margin) : witness);
            } else {
                if (++lp_solves > budget) throw ComputationError("component enumeration budget exhausted");
                if (auto x = realize_prefix(rows, prefix)) run(prefix, *x);
            }
            prefix.pop_back();
        }
    }
};

EnumerationResult random_enumeration(const ConeConfig& config, const EnumerationOptions& options) {
    const SignKernel kernel(config);
    Rng rng(options.seed);
    std::map<std::vector<int>, std::vector<std::int64_t>> found;
    std::vector<int> s(config.size());
    std::vector<std::int64_t> num(config.dim());
    for (std::size_t k = 0; k < options.random_samples; ++k) {
        const long box = 1 + static_cast<long>(k % 7) * 40;
        for (auto& v : num) v = rng.uniform_int(-box, box);
        kernel.signs(num, s);
        if (std::find(s.begin(), s.end(), 0) != s.end()) continue;
        found.emplace(s, num);
    }
    EnumerationResult result;
    result.complete = false;
    result.method = "randomized integer search (possibly incomplete)";
    for (auto& [signs, pt] : found) {
        VectorR x;
        for (auto v : pt) x.emplace_back(static_cast<long>(v));
        // Rescale so each |(x, C_j)| >= 1, matching the exact-mode witness contract.
        Rational smallest;
        bool first = true;
        for (const auto& c : config.vectors()) {
            const Rational v = abs(config.space().inner_product(x, c));
            if (first || v < smallest) smallest = v;
            first = false;
        }
        SignComponent c;
        c.signs = signs;
        c.witness = smallest < 1 ? scaled(x, 1 / smallest) : x;
        c.w_value = w_from_signs(signs);
        result.components.push_back(std::move(c));
    }
    return result;
}

Eigen::MatrixXd to_eigen(const MatrixR& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
    return out;
}

Eigen::VectorXd to_eigen(std::span<const Rational> v) {
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].get_d();
    return out;
}

// Rows s_j·gram·C_j normalized to unit length: the closed cone is {x : rows·x >= 0}.
Eigen::MatrixXd cone_rows(const ConeConfig& config, const std::vector<int>& signs) {
    Eigen::MatrixXd a(config.size(), config.dim());
    for (std::size_t j = 0; j < config.size(); ++j) {
        Eigen::VectorXd r = to_eigen(config.space().functional(config.vectors()[j]));
        a.row(static_cast<Eigen::Index>(j)) = signs[j] * r.transpose() / r.norm();
    }
    return a;
}

// Rationalize x (scaled to unit max-norm) with denominators up to den.
VectorR rationalize(const Eigen::VectorXd& x, long den) {
    const double scale = x.cwiseAbs().maxCoeff();
    VectorR out;
    for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(approximate(x(i) / scale, den));
    return out;
}

bool in_closed_cone(const ConeConfig& config, const std::vector<int>& signs, const VectorR& x) {
    for (std::size_t j = 0; j < signs.size(); ++j)
        if (signs[j] * sgn(config.space().inner_product(x, config.vectors()[j])) < 0) return false;
    return true;
}

struct StationaryMin {
    double value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd point;
};

// Minimum of xᵀGx / xᵀMx over the closed cone, from stationary points on every face span.
StationaryMin stationary_minimum(const Eigen::MatrixXd& g, const Eigen::MatrixXd& m, const Eigen::MatrixXd& a,
                                 double tol) {
    const Eigen::Index n = a.rows();
    const Eigen::Index d = a.cols();
    StationaryMin best;
    std::vector<Eigen::Index> subset;
    auto consider = [&](const Eigen::MatrixXd& z) {
        const Eigen::MatrixXd gz = z.transpose() * g * z;
        const Eigen::MatrixXd mz = z.transpose() * m * z;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(gz, mz);
        if (ges.info() != Eigen::Success) return;
        for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i) {
            Eigen::VectorXd x = z * ges.eigenvectors().col(i);
            const double mx = x.dot(m * x);
            if (!(mx > 0)) continue;
            x /= std::sqrt(mx);
            for (double s : {1.0, -1.0}) {
                const Eigen::VectorXd y = s * x;
                if ((a * y).minCoeff() < -tol) continue;
                const double ratio = y.dot(g * y);
                if (ratio < best.value) {
                    best.value = ratio;
                    best.point = y;
                }
            }
        }
    };
    // Walk all subsets of walls of size < d.
    std::function<void(Eigen::Index)> walk = [&](Eigen::Index start) {
        Eigen::MatrixXd z;
        if (subset.empty()) {
            z = Eigen::MatrixXd::Identity(d, d);
        } else {
            Eigen::MatrixXd as(static_cast<Eigen::Index>(subset.size()), d);
            for (std::size_t r = 0; r < subset.size(); ++r) as.row(static_cast<Eigen::Index>(r)) = a.row(subset[r]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(as);
            lu.setThreshold(1e-10);
            if (lu.rank() >= d) return;
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(lu.kernel());
            z = qr.householderQ() * Eigen::MatrixXd::Identity(d, d - lu.rank());
        }
        consider(z);
        if (static_cast<Eigen::Index>(subset.size()) + 1 >= d) return;
        for (Eigen::Index j = start; j < n; ++j) {
            subset.push_back(j);
            walk(j + 1);
            subset.pop_back();
        }
    };
    walk(0);
    return best;
}

std::vector<std::vector<double>> hit_and_run(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m,
                                             Eigen::VectorXd x, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    const Eigen::Index d = x.size();
    x /= std::sqrt(x.dot(m * x));
    x *= 0.5;
    std::vector<std::vector<double>> out;
    out.reserve(count);
    constexpr std::size_t kBurnIn = 64;
    constexpr std::size_t kThin = 3;
    std::size_t step = 0;
    while (out.size() < count) {
        Eigen::VectorXd dir(d);
        for (Eigen::Index i = 0; i < d; ++i) dir(i) = rng.normal();
        // majorant(x + t·dir) <= 1
        const double qa = dir.dot(m * dir);
        const double qb = x.dot(m * dir);
        const double qc = x.dot(m * x) - 1.0;
        const double disc = std::sqrt(std::max(0.0, qb * qb - qa * qc));
        double lo = (-qb - disc) / qa;
        double hi = (-qb + disc) / qa;
        const Eigen::VectorXd ax = a * x;
        const Eigen::VectorXd ad = a * dir;
        for (Eigen::Index j = 0; j < a.rows(); ++j) {
            if (ad(j) > 0) lo = std::max(lo, -ax(j) / ad(j));
            else if (ad(j) < 0) hi = std::min(hi, -ax(j) / ad(j));
        }
        if (!(hi > lo)) continue;
        const Eigen::VectorXd next = x + rng.uniform(lo, hi) * dir;
        if ((a * next).minCoeff() <= 0) continue;
        x = next;
        ++step;
        if (step > kBurnIn && step % kThin == 0) out.emplace_back(x.data(), x.data() + d);
    }
    return out;
}

}  // namespace

std::optional<VectorR> realize_signs(const ConeConfig& config, const std::vector<int>& signs) {
    if (signs.size() != config.size()) throw ValidationError("sign vector has the wrong length");
    return realize_prefix(wall_rows(config), signs);
}

EnumerationResult enumerate_components(const ConeConfig& config, const EnumerationOptions& options) {
    const auto rows = wall_rows(config);
    TreeSearch search{rows, options.budget, 0, {}};
    std::vector<int> prefix;
    try {
        search.run(prefix, VectorR(config.dim()));
    } catch (const ComputationError&) {
        if (!options.random_fallback) throw;
        auto res = random_enumeration(config, options);
        res.lp_solves = search.lp_solves;
        return res;
    }
    EnumerationResult result;
    result.components = std::move(search.out);
    result.lp_solves = search.lp_solves;
    result.method = "exact LP prefix tree";
    return result;
}

std::vector<std::vector<double>> sample_cone(const ConeConfig& config, const MajorantForm& majorant,
                                             const SignComponent& component, std::size_t count, std::uint64_t seed) {
    return hit_and_run(cone_rows(config, component.signs), to_eigen(majorant.gram), to_eigen(component.witness), count,
                       seed);
}

void classify_component(const ConeConfig& config, const MajorantForm& majorant, SignComponent& component,
                        const ClassifyOptions& options) {
    const auto& space = config.space();
    const Eigen::MatrixXd g = to_eigen(space.gram());
    const Eigen::MatrixXd m = to_eigen(majorant.gram);
    const Eigen::MatrixXd a = cone_rows(config, component.signs);

    StationaryMin best = stationary_minimum(g, m, a, options.membership_tol);
    const auto samples = hit_and_run(a, m, to_eigen(component.witness), options.samples, options.seed);
    for (const auto& s : samples) {
        const Eigen::Map<const Eigen::VectorXd> x(s.data(), static_cast<Eigen::Index>(s.size()));
        const double ratio = x.dot(g * x) / x.dot(m * x);
        if (ratio < best.value) {
            best.value = ratio;
            best.point = x / std::sqrt(x.dot(m * x));
        }
    }
    if (!std::isfinite(best.value)) throw ComputationError("cone minimization found no feasible candidate");
    component.inf_ratio = best.value;
    component.exact_class = false;
    component.class_witness.clear();

    // Exact shortcut: the LP witness itself may already be negative.
    if (sgn(space.norm(component.witness)) < 0) {
        component.closure_class = ClosureClass::meets_negative;
        component.meets_negative = true;
        component.exact_class = true;
        component.class_witness = component.witness;
        component.inf_ratio = std::min(component.inf_ratio, 0.0);
        return;
    }

    if (best.value < -options.dead_band) {
        component.closure_class = ClosureClass::meets_negative;
        component.meets_negative = true;
        // Push the minimizer into the open cone and confirm exactly.
        const Eigen::VectorXd w = to_eigen(component.witness);
        const Eigen::VectorXd wn = w / std::sqrt(w.dot(m * w));
        for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
            for (long den : {100L, 10000L, 1000000L}) {
                const VectorR x = rationalize(best.point + eps * wn, den);
                if (sign_vector(config, x).signs == component.signs && sgn(space.norm(x)) < 0) {
                    component.exact_class = true;
                    component.class_witness = x;
                    return;
                }
            }
        }
        return;
    }
    component.meets_negative = false;
    if (best.value <= options.dead_band) {
        component.closure_class = ClosureClass::boundary_touch;
        for (long den : {10L, 100L, 1000L, 10000L}) {
            const VectorR x = rationalize(best.point, den);
            if (!is_zero(x) && sgn(space.norm(x)) == 0 && in_closed_cone(config, component.signs, x)) {
                component.exact_class = true;
                component.class_witness = x;
                break;
            }
        }
        return;
    }
    component.closure_class = ClosureClass::vertex_only;
}

ConvergenceCertificate compute_r_inf(const ConeConfig& config, const CertificateOptions& options) {
    if (!check_all(config).overall)
        throw ValidationError("convergence certificate requires a configuration satisfying (I.1)-(I.3)");
    const MajorantForm majorant = build_majorant(config.space());
    auto enumeration = enumerate_components(config, options.enumeration);

    ConvergenceCertificate cert;
    cert.tolerance = options.tolerance;
    cert.enumeration_complete = enumeration.complete;
    cert.partial = !enumeration.complete;
    cert.method = enumeration.method +
                  "; face-span generalized eigenvectors + hit-and-run cross-check (numerical unless an exact witness is listed)";
    std::size_t index = 0;
    for (auto& c : enumeration.components) {
        ClassifyOptions copt = options.classify;
        copt.seed = options.classify.seed + index++;
        try {
            classify_component(config, majorant, c, copt);
        } catch (const ComputationError&) {
            cert.partial = true;
            continue;
        }
        if (c.closure_class == ClosureClass::vertex_only) {
            cert.vertex_only_cones.push_back(c);
            cert.per_cone_inf.push_back(c.inf_ratio);
            cert.r_inf = std::min(cert.r_inf, c.inf_ratio);
        }
    }
    cert.components = std::move(enumeration.components);

    if (cert.vertex_only_cones.empty()) {
        cert.note = "no vertex-only cones: Phi vanishes on all regular vectors";
        return cert;
    }
    const Eigen::MatrixXd g = to_eigen(config.space().gram());
    const Eigen::MatrixXd m = to_eigen(majorant.gram);
    for (std::size_t k = 0; k < cert.vertex_only_cones.size(); ++k) {
        const auto pts = sample_cone(config, majorant, cert.vertex_only_cones[k], options.validation_samples,
                                     options.seed + k);
        for (const auto& p : pts) {
            const Eigen::Map<const Eigen::VectorXd> x(p.data(), static_cast<Eigen::Index>(p.size()));
            const double q = x.dot(g * x);
            const double mj = x.dot(m * x);
            ++cert.validation.samples;
            cert.validation.min_observed_ratio = std::min(cert.validation.min_observed_ratio, q / mj);
            if (q < (cert.r_inf - options.tolerance) * mj) ++cert.validation.violations;
        }
    }
    return cert;
}

}  // namespace itheta
