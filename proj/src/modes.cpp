#include "slk/modes.hpp"

#include <algorithm>
#include <cmath>

#include "slk/simd.hpp"

namespace slk {

double kde_at(const Dataset& ds, const KernelSpec& ks,
              const std::vector<double>& z_col, const double* y) {
    const double mass = simd::sum(z_col.data(), z_col.size());
    if (!(mass > 0.0)) throw DomainError("empty cluster: zero assignment mass");
    double s = 0.0;
    for (std::size_t q = 0; q < ds.n(); ++q)
        if (z_col[q] > 0.0)
            s += z_col[q] * gaussian_kernel(y, ds.points.row(q), ds.dim(), ks);
    return s / mass;
}

std::vector<double> mean_shift_mode(const Dataset& ds, const KernelSpec& ks,
                                    const std::vector<double>& z_col,
                                    const std::vector<double>& m_start,
                                    double ms_tol, std::size_t ms_max) {
    const std::size_t n = ds.n(), d = ds.dim();
    if (!(simd::sum(z_col.data(), n) > 0.0))
        throw DomainError("empty cluster: zero assignment mass");
    const double sigma = std::sqrt(ks.sigma2);
    std::vector<double> m = m_start;
    std::vector<double> next(d);
    for (std::size_t it = 0; it < ms_max; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        double denom = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (z_col[p] <= 0.0) continue;
            const double w =
                z_col[p] * gaussian_kernel(ds.points.row(p), m.data(), d, ks);
            simd::axpy(w, ds.points.row(p), next.data(), d);
            denom += w;
        }
        if (!(denom > 0.0)) break;  // all kernel mass underflowed; keep m
        for (std::size_t j = 0; j < d; ++j) next[j] /= denom;
        const double delta =
            std::sqrt(simd::squared_distance(next.data(), m.data(), d));
        m.swap(next);
        if (delta < ms_tol * sigma) break;
    }
    return m;
}

std::uint32_t byproduct_mode(const Matrix& z, std::size_t l) {
    std::uint32_t best = 0;
    double best_val = z(0, l);
    for (std::size_t p = 1; p < z.rows(); ++p)
        if (z(p, l) > best_val) {
            best_val = z(p, l);
            best = static_cast<std::uint32_t>(p);
        }
    return best;
}

std::uint32_t hard_max_mode_oracle(const Dataset& ds, const KernelSpec& ks,
                                   const std::vector<double>& z_col,
                                   const double* m_prev,
                                   const std::vector<std::uint32_t>& candidates) {
    if (candidates.empty()) throw UsageError("empty mode candidate set");
    const std::size_t d = ds.dim();
    // lowest index wins ties
    std::vector<std::uint32_t> order = candidates;
    std::sort(order.begin(), order.end());
    std::uint32_t best = order[0];
    double best_val = -1.0;
    for (std::uint32_t c : order) {
        const double* y = ds.points.row(c);
        double val = m_prev ? gaussian_kernel(y, m_prev, d, ks) : 0.0;
        for (std::size_t p = 0; p < ds.n(); ++p)
            if (z_col[p] > 0.0)
                val += z_col[p] * gaussian_kernel(ds.points.row(p), y, d, ks);
        if (val > best_val) {
            best_val = val;
            best = c;
        }
    }
    return best;
}

}  // namespace slk
