#include "itheta/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "itheta/errors.hpp"
#include "itheta/random.hpp"

namespace itheta {

ConeConfig::ConeConfig(QuadraticSpace space, std::vector<VectorR> vectors)
    : space_(std::move(space)), vectors_(std::move(vectors)) {
    if (vectors_.size() < 2) throw ValidationError("a cone configuration needs N >= 2 vectors");
    for (std::size_t j = 0; j < vectors_.size(); ++j) {
        if (vectors_[j].size() != space_.dim())
            throw ValidationError("C_" + std::to_string(j + 1) + " has the wrong dimension");
        if (is_zero(vectors_[j])) throw ValidationError("C_" + std::to_string(j + 1) + " is zero");
    }
    const std::size_t n = vectors_.size();
    gram_cache_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            gram_cache_[i * n + j] = space_.inner_product(vectors_[i], vectors_[j]);
            gram_cache_[j * n + i] = gram_cache_[i * n + j];
        }
}

ConeConfig ConeConfig::rotated(long shift) const {
    std::vector<VectorR> out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = at(static_cast<long>(j) + shift);
    return ConeConfig(space_, std::move(out));
}

ConeConfig ConeConfig::reversed() const {
    std::vector<VectorR> out(vectors_.rbegin(), vectors_.rend());
    return ConeConfig(space_, std::move(out));
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::I1: return "I.1";
        case Condition::I2: return "I.2";
        case Condition::I3: return "I.3";
        case Condition::NoThreeNulls: return "no-three-nulls";
    }
    return "?";
}

std::string to_string(I2Verdict::Branch b) {
    switch (b) {
        case I2Verdict::Branch::determinant: return "determinant>0";
        case I2Verdict::Branch::orthogonality: return "inner_product=0";
        case I2Verdict::Branch::vacuous: return "vacuous";
    }
    return "?";
}

std::string to_string(I3Verdict::Branch b) {
    switch (b) {
        case I3Verdict::Branch::negative_norm: return "negative_norm";
        case I3Verdict::Branch::null_vector: return "null_vector";
        case I3Verdict::Branch::vacuous: return "vacuous";
    }
    return "?";
}

std::vector<I1Verdict> check_I1(const ConeConfig& config) {
    std::vector<I1Verdict> out;
    for (std::size_t j = 0; j < config.size(); ++j) {
        const Rational& nrm = config.norm(static_cast<long>(j));
        out.push_back({j + 1, nrm, sgn(nrm) <= 0});
    }
    return out;
}

std::vector<I2Verdict> check_I2(const ConeConfig& config) {
    std::vector<I2Verdict> out;
    for (long j = 0; j < static_cast<long>(config.size()); ++j) {
        I2Verdict v;
        v.j = static_cast<std::size_t>(j) + 1;
        v.norm_product = config.norm(j) * config.norm(j + 1);
        const Rational& cross = config.gram(j, j + 1);
        if (sgn(v.norm_product) > 0) {
            v.branch = I2Verdict::Branch::determinant;
            v.tested = v.norm_product - cross * cross;
            v.pass = sgn(v.tested) > 0;
        } else if (sgn(v.norm_product) == 0) {
            v.branch = I2Verdict::Branch::orthogonality;
            v.tested = cross;
            v.pass = sgn(cross) == 0;
        } else {
            // Only reachable when (I.1) already fails; the condition imposes nothing here.
            v.branch = I2Verdict::Branch::vacuous;
            v.tested = v.norm_product - cross * cross;
            v.pass = true;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<I3Verdict> check_I3(const ConeConfig& config) {
    std::vector<I3Verdict> out;
    for (long j = 0; j < static_cast<long>(config.size()); ++j) {
        I3Verdict v;
        v.j = static_cast<std::size_t>(j) + 1;
        const Rational& nrm = config.norm(j);
        if (sgn(nrm) < 0) {
            v.branch = I3Verdict::Branch::negative_norm;
            v.tested = nrm * config.gram(j - 1, j + 1) - config.gram(j, j - 1) * config.gram(j, j + 1);
            v.pass = sgn(v.tested) < 0;
        } else if (sgn(nrm) == 0) {
            v.branch = I3Verdict::Branch::null_vector;
            v.tested = config.gram(j - 1, j + 1);
            v.pass = sgn(v.tested) > 0;
        } else {
            v.branch = I3Verdict::Branch::vacuous;
            v.tested = nrm * config.gram(j - 1, j + 1) - config.gram(j, j - 1) * config.gram(j, j + 1);
            v.pass = true;
        }
        out.push_back(v);
    }
    return out;
}

bool check_no_three_nulls(const ConeConfig& config) {
    for (long j = 0; j < static_cast<long>(config.size()); ++j)
        if (sgn(config.norm(j)) == 0 && sgn(config.norm(j + 1)) == 0 && sgn(config.norm(j + 2)) == 0) return false;
    return true;
}

IncidenceReport check_all(const ConeConfig& config) {
    IncidenceReport r;
    r.i1 = check_I1(config);
    r.i2 = check_I2(config);
    r.i3 = check_I3(config);
    r.no_three_nulls = check_no_three_nulls(config);
    for (const auto& v : r.i1)
        if (!v.pass) r.violations.push_back({Condition::I1, v.j, v.norm});
    for (const auto& v : r.i2)
        if (!v.pass) r.violations.push_back({Condition::I2, v.j, v.tested});
    for (const auto& v : r.i3)
        if (!v.pass) r.violations.push_back({Condition::I3, v.j, v.tested});
    r.overall = r.violations.empty();
    return r;
}

std::pair<Rational, Rational> circle_point(const Rational& t) {
    const Rational t2 = t * t;
    Rational a = (1 - t2) / (1 + t2);
    Rational b = 2 * t / (1 + t2);
    return {a, b};
}

namespace {

// Rational point on the unit circle close to angle theta; tan-half-angle parameters stay in [-1, 1].
std::pair<Rational, Rational> rational_direction(double theta, long den_bound) {
    double r = std::remainder(theta, 2 * std::numbers::pi);
    const bool flip = std::fabs(r) > std::numbers::pi / 2;
    if (flip) r = std::remainder(r + std::numbers::pi, 2 * std::numbers::pi);
    auto [a, b] = circle_point(approximate(std::tan(r / 2), den_bound));
    if (flip) {
        a = -a;
        b = -b;
    }
    return {a, b};
}

std::vector<double> loop_angles(Rng& rng, std::size_t n, unsigned winding, bool monotone) {
    const double total = 2 * std::numbers::pi * winding;
    std::vector<double> angles(n);
    if (!monotone) {
        for (auto& a : angles) a = rng.uniform(0, 2 * std::numbers::pi);
        return angles;
    }
    for (;;) {
        std::vector<double> gaps(n);
        double sum = 0;
        for (auto& g : gaps) sum += (g = rng.uniform(0.2, 1.0));
        bool ok = true;
        for (auto& g : gaps) {
            g *= total / sum;
            if (g >= std::numbers::pi - 0.05 || g <= 0.05) ok = false;
        }
        if (!ok) continue;
        double theta = rng.uniform(0, 2 * std::numbers::pi);
        for (std::size_t j = 0; j < n; ++j) {
            angles[j] = theta;
            theta += gaps[j];
        }
        return angles;
    }
}

bool acceptable(const ConeConfig& config, bool monotone) {
    if (monotone) return check_all(config).overall;
    for (const auto& v : check_I1(config))
        if (!v.pass) return false;
    for (const auto& v : check_I2(config))
        if (!v.pass) return false;
    return check_no_three_nulls(config);
}

}  // namespace

ConeConfig random_config(const QuadraticSpace& space, std::size_t n, const GeneratorOptions& options,
                         std::uint64_t seed) {
    if (n < 3) throw ValidationError("the generator needs N >= 3");
    if (options.winding == 0) throw ValidationError("winding must be positive");
    if (options.monotone && n <= 2 * options.winding)
        throw ValidationError("N must exceed 2*winding for steps below pi");
    Rng rng(seed);
    const VectorR e1 = space.negative_direction(0);
    const VectorR e2 = space.negative_direction(1);
    const MatrixR& t = space.diagonalizer();
    constexpr long kPerturbDen = 64;

    for (unsigned attempt = 0; attempt < options.max_attempts; ++attempt) {
        const auto angles = loop_angles(rng, n, options.winding, options.monotone);
        std::vector<VectorR> vecs;
        vecs.reserve(n);
        for (double theta : angles) {
            auto [a, b] = rational_direction(theta, options.denominator_bound);
            VectorR c = add(scaled(e1, a), scaled(e2, b));
            if (options.mode == GeneratorMode::perturbed) {
                VectorR coeff(space.dim());
                for (auto& q : coeff) q = rng.rational(1, kPerturbDen) * options.perturbation;
                c = add(c, t * coeff);
            }
            vecs.push_back(std::move(c));
        }
        bool nonzero = std::none_of(vecs.begin(), vecs.end(), [](const VectorR& v) { return is_zero(v); });
        if (!nonzero) continue;
        ConeConfig config(space, std::move(vecs));
        if (acceptable(config, options.monotone)) return config;
    }
    throw ComputationError("configuration generator: no acceptable configuration after " +
                           std::to_string(options.max_attempts) + " attempts");
}

ConeConfig random_valid_config(const QuadraticSpace& space, std::size_t n, GeneratorMode mode, std::uint64_t seed) {
    GeneratorOptions options;
    options.mode = mode;
    return random_config(space, n, options, seed);
}

}  // namespace itheta
