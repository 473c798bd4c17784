#include "itheta/signwalk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "itheta/errors.hpp"

namespace itheta {

SignVector sign_vector(const ConeConfig& config, std::span<const Rational> x) {
    const VectorR gx = config.space().functional(x);
    SignVector s;
    s.signs.reserve(config.size());
    for (const auto& c : config.vectors()) s.signs.push_back(sgn(dot(gx, c)));
    return s;
}

bool is_regular(const ConeConfig& config, std::span<const Rational> x) {
    const auto s = sign_vector(config, x);
    return std::none_of(s.signs.begin(), s.signs.end(), [](int v) { return v == 0; });
}

int w_from_signs(std::span<const int> signs) {
    const std::size_t n = signs.size();
    int w = 0;
    for (std::size_t j = 0; j < n; ++j) w += signs[j] * signs[(j + 1) % n];
    return w;
}

int evaluate_w(const ConeConfig& config, std::span<const Rational> x) {
    return w_from_signs(sign_vector(config, x).signs);
}

std::vector<VectorR> kernel_basis(std::span<const Rational> row) {
    const std::size_t n = row.size();
    std::size_t pivot = n;
    for (std::size_t i = 0; i < n; ++i)
        if (sgn(row[i]) != 0) {
            pivot = i;
            break;
        }
    std::vector<VectorR> basis;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == pivot) continue;
        VectorR v(n);
        v[i] = 1;
        if (pivot < n) v[pivot] = -row[i] / row[pivot];
        basis.push_back(std::move(v));
    }
    return basis;
}

VectorR random_negative_vector(const QuadraticSpace& space, Rng& rng, long den) {
    const std::size_t n = space.dim();
    const auto& diag = space.diag();
    for (;;) {
        VectorR y(n);
        Rational neg_mass = 0, pos_mass = 0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.rational(1, den);
            (sgn(diag[i]) < 0 ? neg_mass : pos_mass) += abs(diag[i]) * y[i] * y[i];
        }
        if (sgn(neg_mass) == 0) continue;
        if (pos_mass >= neg_mass) {
            const double ratio = std::sqrt(neg_mass.get_d() / pos_mass.get_d());
            const Rational s = approximate(rng.uniform(0.05, 0.95) * ratio, den);
            for (std::size_t i = 0; i < n; ++i)
                if (sgn(diag[i]) > 0) y[i] *= s;
        }
        VectorR x = space.diagonalizer() * y;
        if (sgn(space.norm(x)) < 0) return x;
    }
}

VectorR random_negative_regular_vector(const ConeConfig& config, Rng& rng) {
    for (;;) {
        VectorR v = random_negative_vector(config.space(), rng);
        if (is_regular(config, v)) return v;
    }
}

VectorR random_negative_wall_vector(const ConeConfig& config, std::size_t j, Rng& rng) {
    const auto& space = config.space();
    const auto basis = kernel_basis(space.functional(config.at(static_cast<long>(j))));
    // Start from a random negative vector u and remove its C_j component along a
    // kernel-complement direction; fall back to random kernel combinations.
    for (int attempt = 0; attempt < 20000; ++attempt) {
        VectorR v(space.dim());
        if (attempt % 2 == 0) {
            const VectorR u = random_negative_vector(space, rng);
            const Rational cu = space.inner_product(u, config.at(static_cast<long>(j)));
            // Solve (u + s·e, C_j) = 0 along a random direction e with (e, C_j) != 0.
            VectorR e = random_negative_vector(space, rng);
            const Rational ce = space.inner_product(e, config.at(static_cast<long>(j)));
            if (sgn(ce) == 0) continue;
            v = add(u, scaled(e, -cu / ce));
        } else {
            for (const auto& b : basis) v = add(v, scaled(b, rng.rational(1, 97)));
        }
        if (is_zero(v)) continue;
        if (sgn(space.norm(v)) < 0) return v;
    }
    throw ComputationError("no negative vector found on wall " + std::to_string(j + 1));
}

ReferenceWeight reference_weight(const ConeConfig& config, const ReferenceOptions& options) {
    if (!options.allow_invalid && !check_all(config).overall)
        throw ValidationError("reference weight requires a configuration satisfying (I.1)-(I.3); "
                              "supply an explicit reference for invalid configurations");
    const auto& space = config.space();
    const VectorR e1 = space.negative_direction(0);
    const VectorR e2 = space.negative_direction(1);

    std::optional<VectorR> witness;
    std::size_t tried = 0;
    // Ladder 1: integer grid in the negative plane, by increasing max-norm.
    for (long radius = 1; !witness && tried < options.search_budget; ++radius) {
        for (long a = -radius; a <= radius && !witness; ++a)
            for (long b = -radius; b <= radius && !witness; ++b) {
                if (std::max(std::labs(a), std::labs(b)) != radius) continue;
                if (++tried > options.search_budget) break;
                VectorR v = add(scaled(e1, Rational(a)), scaled(e2, Rational(b)));
                if (is_regular(config, v)) witness = std::move(v);
            }
        if (radius > 64) break;
    }
    // Ladder 2: seeded random negative vectors.
    Rng rng(options.seed);
    for (std::size_t k = 0; !witness && k < options.search_budget; ++k) {
        VectorR v = random_negative_vector(space, rng);
        if (is_regular(config, v)) witness = std::move(v);
    }
    if (!witness)
        throw ComputationError("no regular negative vector found within a budget of " +
                               std::to_string(options.search_budget) + " candidates");

    ReferenceWeight ref;
    ref.w_c = evaluate_w(config, *witness);
    ref.witness = std::move(*witness);
    if (options.allow_invalid) return ref;

    for (std::size_t k = 0; k < options.audit_samples; ++k) {
        const VectorR v = random_negative_regular_vector(config, rng);
        const int w = evaluate_w(config, v);
        if (w != ref.w_c)
            throw ComputationError("reference weight audit failed: w=" + std::to_string(w) + " at " + to_string(v) +
                                   " but w=" + std::to_string(ref.w_c) + " at " + to_string(ref.witness));
    }
    ref.audited = true;
    ref.audit_samples = options.audit_samples;
    return ref;
}

int phi(const ConeConfig& config, std::span<const Rational> x, const std::optional<ReferenceWeight>& reference) {
    const int w_c = reference ? reference->w_c : reference_weight(config).w_c;
    return evaluate_w(config, x) - w_c;
}

long winding_count(const ConeConfig& config, std::span<const Rational> v) {
    const auto s = sign_vector(config, v).signs;
    long changes = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == 0) throw ValidationError("winding count needs a regular vector; (v,C_" + std::to_string(j + 1) + ")=0");
        if (s[j] * s[(j + 1) % s.size()] < 0) ++changes;
    }
    return changes / 2;
}

std::string to_string(PathReport::Status s) {
    switch (s) {
        case PathReport::Status::constant: return "constant";
        case PathReport::Status::w_jump: return "w_jump";
        case PathReport::Status::wall_product: return "wall_product";
    }
    return "?";
}

bool segment_is_negative(const QuadraticSpace& space, std::span<const Rational> a, std::span<const Rational> b) {
    const VectorR d = sub(b, a);
    const Rational aa = space.norm(a);
    const Rational ad = space.inner_product(a, d);
    const Rational dd = space.norm(d);
    if (sgn(aa) >= 0 || sgn(aa + 2 * ad + dd) >= 0) return false;
    if (sgn(dd) < 0) {
        const Rational t = -ad / dd;
        if (sgn(t) > 0 && t < 1 && sgn(aa - ad * ad / dd) >= 0) return false;
    }
    return true;
}

PathReport path_constancy_check(const ConeConfig& config, std::span<const VectorR> path, std::size_t steps) {
    if (path.size() < 2) throw ValidationError("a path needs at least two vertices");
    const auto& space = config.space();
    for (std::size_t s = 0; s + 1 < path.size(); ++s)
        if (!segment_is_negative(space, path[s], path[s + 1]))
            throw ValidationError("path leaves V_<0 on segment " + std::to_string(s + 1));

    PathReport report;
    bool have_w = false;
    auto visit = [&](const VectorR& x, std::size_t seg, const Rational& t) -> bool {
        const int w = evaluate_w(config, x);
        ++report.samples;
        if (!have_w) {
            report.w_value = w;
            have_w = true;
            return true;
        }
        if (w == report.w_value) return true;
        report.status = PathReport::Status::w_jump;
        report.segment = seg + 1;
        report.t = t;
        report.w_before = report.w_value;
        report.w_after = w;
        report.message = "w jumps " + std::to_string(report.w_value) + " -> " + std::to_string(w) + " at segment " +
                         std::to_string(seg + 1) + ", t=" + to_string(t);
        return false;
    };

    for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
        const VectorR& a = path[seg];
        const VectorR d = sub(path[seg + 1], a);
        const VectorR ga = space.functional(a);
        const VectorR gd = space.functional(d);
        std::set<Rational> params;
        for (std::size_t k = 0; k <= steps; ++k) params.insert(Rational(static_cast<long>(k), static_cast<long>(std::max<std::size_t>(steps, 1))));
        std::set<Rational> events;
        for (const auto& c : config.vectors()) {
            const Rational alpha = dot(ga, c);
            const Rational slope = dot(gd, c);
            if (sgn(slope) == 0) continue;
            const Rational t = -alpha / slope;
            if (sgn(t) >= 0 && t <= 1) events.insert(t);
        }
        // Midpoints between consecutive events are regular for every wall crossed transversally.
        std::vector<Rational> cuts(events.begin(), events.end());
        cuts.insert(cuts.begin(), Rational(0));
        cuts.push_back(Rational(1));
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i] < cuts[i + 1]) params.insert((cuts[i] + cuts[i + 1]) / 2);
        params.insert(events.begin(), events.end());

        // Regular samples first, so a jump is reported between the pieces on either side of a wall.
        for (const auto& t : params)
            if (!events.count(t) && !visit(add(a, scaled(d, t)), seg, t)) return report;
        for (const auto& t : events) {
            const VectorR x = add(a, scaled(d, t));
            if (!visit(x, seg, t)) return report;
            // Every vanishing (x, C_j) must have neighbours of opposite sign.
            const auto s = sign_vector(config, x).signs;
            const long n = static_cast<long>(s.size());
            for (long j = 0; j < n; ++j) {
                if (s[j] != 0) continue;
                ++report.crossings;
                const int prod = s[((j - 1) % n + n) % n] * s[(j + 1) % n];
                if (prod != -1) {
                    report.status = PathReport::Status::wall_product;
                    report.segment = seg + 1;
                    report.t = t;
                    report.wall = static_cast<std::size_t>(j) + 1;
                    report.message = "neighbour product " + std::to_string(prod) + " on wall " +
                                     std::to_string(j + 1) + " at segment " + std::to_string(seg + 1) + ", t=" +
                                     to_string(t);
                    return report;
                }
            }
        }
    }
    return report;
}

// --- SignKernel -------------------------------------------------------------

namespace {

bool fits_int64(const Integer& z) { return z.fits_slong_p(); }

std::vector<Integer> integer_multiple(std::span<const Rational> v) {
    const Integer den = common_denominator(v);
    std::vector<Integer> out;
    out.reserve(v.size());
    for (const auto& q : v) {
        Rational s = q * den;
        out.push_back(s.get_num());
    }
    return out;
}

}  // namespace

SignKernel::SignKernel(const ConeConfig& config) : dim_(config.dim()) {
    for (const auto& c : config.vectors()) {
        auto row = integer_multiple(config.space().functional(c));
        std::vector<std::int64_t> small;
        for (const auto& z : row) {
            if (!fits_int64(z)) small_ = false;
            small.push_back(small_ ? z.get_si() : 0);
        }
        rows_.push_back(std::move(small));
        big_rows_.push_back(std::move(row));
    }
    const auto& g = config.space().gram();
    std::vector<Rational> flat;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) flat.push_back(g(i, j));
    gram_scale_ = common_denominator(flat);
    gram_int_ = integer_multiple(flat);
}

void SignKernel::signs(std::span<const std::int64_t> num, std::span<int> out) const {
    if (small_) {
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            __int128 acc = 0;
            const auto& r = rows_[j];
            for (std::size_t i = 0; i < dim_; ++i) acc += static_cast<__int128>(r[i]) * num[i];
            out[j] = (acc > 0) - (acc < 0);
        }
        return;
    }
    for (std::size_t j = 0; j < big_rows_.size(); ++j) {
        Integer acc = 0;
        for (std::size_t i = 0; i < dim_; ++i) acc += big_rows_[j][i] * Integer(static_cast<long>(num[i]));
        out[j] = sgn(acc);
    }
}

int SignKernel::w(std::span<const std::int64_t> num) const {
    int buf[64];
    std::vector<int> heap;
    std::span<int> s = rows_.size() <= 64 ? std::span<int>(buf, rows_.size())
                                          : std::span<int>(heap = std::vector<int>(rows_.size()));
    signs(num, s);
    return w_from_signs(s);
}

Integer SignKernel::norm_numerator(std::span<const std::int64_t> num) const {
    Integer acc = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (num[i] == 0) continue;
        Integer row = 0;
        for (std::size_t j = 0; j < dim_; ++j)
            if (num[j] != 0) row += gram_int_[i * dim_ + j] * Integer(static_cast<long>(num[j]));
        acc += row * Integer(static_cast<long>(num[i]));
    }
    return acc;
}

}  // namespace itheta
