#include "itheta/exact_lp.hpp"

#include "itheta/errors.hpp"

namespace itheta {

std::optional<VectorR> solve_feasibility(std::span<const VectorR> rows, std::span<const Rational> rhs) {
    const std::size_t m = rows.size();
    if (rhs.size() != m) throw ValidationError("solve_feasibility: row/rhs count mismatch");
    if (m == 0) return VectorR{};
    const std::size_t d = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != d) throw ValidationError("solve_feasibility: ragged constraint rows");

    // Columns: x+ (d), x- (d), surplus (m), artificial (m), rhs.
    const std::size_t n_cols = 2 * d + 2 * m;
    const std::size_t art0 = 2 * d + m;
    std::vector<VectorR> tab(m, VectorR(n_cols + 1));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const int flip = sgn(rhs[i]) < 0 ? -1 : 1;
        for (std::size_t k = 0; k < d; ++k) {
            tab[i][k] = flip * rows[i][k];
            tab[i][d + k] = -flip * rows[i][k];
        }
        tab[i][2 * d + i] = -flip;
        tab[i][art0 + i] = 1;
        tab[i][n_cols] = flip * rhs[i];
        basis[i] = art0 + i;
    }
    // Reduced costs of the phase-I objective (sum of artificials).
    VectorR cost(n_cols + 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c <= n_cols; ++c)
            if (c < art0 || c == n_cols) cost[c] -= tab[i][c];

    for (;;) {
        std::size_t enter = n_cols;
        for (std::size_t c = 0; c < n_cols; ++c)
            if (sgn(cost[c]) < 0) {
                enter = c;
                break;
            }
        if (enter == n_cols) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(tab[i][enter]) <= 0) continue;
            Rational ratio = tab[i][n_cols] / tab[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m) break;  // unbounded direction; cannot happen for a bounded-below phase I
        const Rational piv = tab[leave][enter];
        for (auto& v : tab[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || sgn(tab[i][enter]) == 0) continue;
            const Rational f = tab[i][enter];
            for (std::size_t c = 0; c <= n_cols; ++c)
                if (sgn(tab[leave][c]) != 0) tab[i][c] -= f * tab[leave][c];
        }
        if (sgn(cost[enter]) != 0) {
            const Rational f = cost[enter];
            for (std::size_t c = 0; c <= n_cols; ++c)
                if (sgn(tab[leave][c]) != 0) cost[c] -= f * tab[leave][c];
        }
        basis[leave] = enter;
    }
    if (sgn(cost[n_cols]) != 0) return std::nullopt;  // -(sum of artificials) != 0

    VectorR x(d);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = basis[i];
        if (b < d) x[b] += tab[i][n_cols];
        else if (b < 2 * d) x[b - d] -= tab[i][n_cols];
    }
    return x;
}

}  // namespace itheta
