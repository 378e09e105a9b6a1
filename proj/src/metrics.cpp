#include "slk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "slk/simd.hpp"

namespace slk {

namespace {

// contingency counts with dense relabeling of both sides
struct Contingency {
    std::vector<std::vector<double>> counts;  // [pred][truth]
    std::vector<double> pred_totals, truth_totals;
    double n = 0;
};

Contingency build_contingency(const std::vector<int>& pred,
                              const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw ShapeError("label vectors have different lengths");
    std::map<int, std::size_t> pmap, tmap;
    for (int v : pred) pmap.emplace(v, pmap.size());
    for (int v : truth) tmap.emplace(v, tmap.size());
    Contingency c;
    c.counts.assign(pmap.size(), std::vector<double>(tmap.size(), 0.0));
    c.pred_totals.assign(pmap.size(), 0.0);
    c.truth_totals.assign(tmap.size(), 0.0);
    c.n = static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const std::size_t a = pmap[pred[i]], b = tmap[truth[i]];
        c.counts[a][b] += 1.0;
        c.pred_totals[a] += 1.0;
        c.truth_totals[b] += 1.0;
    }
    return c;
}

double entropy(const std::vector<double>& totals, double n) {
    double h = 0.0;
    for (double t : totals)
        if (t > 0.0) h -= (t / n) * std::log(t / n);
    return h;
}

}  // namespace

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Contingency c = build_contingency(pred, truth);
    const double hp = entropy(c.pred_totals, c.n);
    const double ht = entropy(c.truth_totals, c.n);
    if (hp == 0.0 && ht == 0.0)
        return c.pred_totals.size() == 1 && c.truth_totals.size() == 1 ? 1.0 : 0.0;
    if (hp == 0.0 || ht == 0.0) return 0.0;
    double mi = 0.0;
    for (std::size_t a = 0; a < c.pred_totals.size(); ++a)
        for (std::size_t b = 0; b < c.truth_totals.size(); ++b) {
            const double nij = c.counts[a][b];
            if (nij > 0.0)
                mi += (nij / c.n) *
                      std::log(c.n * nij / (c.pred_totals[a] * c.truth_totals[b]));
        }
    return mi / std::sqrt(hp * ht);
}

std::vector<std::size_t> max_assignment(const Matrix& score) {
    // Hungarian algorithm with potentials on the negated scores
    const std::size_t n = score.rows();
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // match[col] = row (1-based)
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        std::vector<std::size_t> way(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                std::size_t num_clusters) {
    if (pred.size() != truth.size())
        throw ShapeError("label vectors have different lengths");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] < 0 || truth[i] < 0 ||
            static_cast<std::size_t>(pred[i]) >= num_clusters ||
            static_cast<std::size_t>(truth[i]) >= num_clusters)
            throw DomainError("label out of range [0, L) at position " +
                              std::to_string(i));
    Matrix counts(num_clusters, num_clusters, 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i)
        counts(pred[i], truth[i]) += 1.0;
    const std::vector<std::size_t> assign = max_assignment(counts);
    double matched = 0.0;
    for (std::size_t a = 0; a < num_clusters; ++a) matched += counts(a, assign[a]);
    return matched / static_cast<double>(pred.size());
}

std::vector<std::uint32_t> kmeanspp_seeds(const Dataset& ds, std::size_t l,
                                          std::uint64_t seed) {
    const std::size_t n = ds.n(), d = ds.dim();
    if (l > n)
        throw BoundsError("cannot draw " + std::to_string(l) + " seeds from " +
                          std::to_string(n) + " points");
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> seeds;
    seeds.reserve(l);
    std::vector<char> chosen(n, 0);

    std::uniform_int_distribution<std::size_t> uni(0, n - 1);
    const std::uint32_t first = static_cast<std::uint32_t>(uni(rng));
    seeds.push_back(first);
    chosen[first] = 1;

    std::vector<double> d2(n);
    for (std::size_t q = 0; q < n; ++q)
        d2[q] = simd::squared_distance(ds.points.row(q), ds.points.row(first), d);

    while (seeds.size() < l) {
        const double total = simd::sum(d2.data(), n);
        std::uint32_t next = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> ureal(0.0, total);
            double r = ureal(rng);
            std::size_t q = 0;
            for (; q + 1 < n; ++q) {
                r -= d2[q];
                if (r <= 0.0) break;
            }
            // coincident duplicates carry zero weight; step to the next free point
            while (chosen[q]) q = (q + 1) % n;
            next = static_cast<std::uint32_t>(q);
        } else {
            std::size_t q = 0;
            while (chosen[q]) ++q;
            next = static_cast<std::uint32_t>(q);
        }
        seeds.push_back(next);
        chosen[next] = 1;
        for (std::size_t q = 0; q < n; ++q) {
            const double dist =
                simd::squared_distance(ds.points.row(q), ds.points.row(next), d);
            if (dist < d2[q]) d2[q] = dist;
        }
    }
    return seeds;
}

}  // namespace slk
