#include "slk/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "slk/simd.hpp"

namespace slk {

namespace {

using DistIdx = std::pair<double, std::uint32_t>;

void exact_knn_row(const Dataset& ds, std::size_t p, std::size_t k_n,
                   std::vector<DistIdx>& scratch,
                   std::vector<std::uint32_t>& out) {
    const std::size_t n = ds.n(), d = ds.dim();
    scratch.clear();
    const double* xp = ds.points.row(p);
    for (std::size_t q = 0; q < n; ++q) {
        if (q == p) continue;
        scratch.emplace_back(simd::squared_distance(xp, ds.points.row(q), d),
                             static_cast<std::uint32_t>(q));
    }
    std::partial_sort(scratch.begin(), scratch.begin() + k_n, scratch.end());
    out.resize(k_n);
    for (std::size_t i = 0; i < k_n; ++i) out[i] = scratch[i].second;
}

// kd-tree over dataset rows; exact search with bounding-box pruning.
class KdTree {
public:
    KdTree(const Dataset& ds) : ds_(ds) {
        const std::size_t n = ds.n();
        perm_.resize(n);
        std::iota(perm_.begin(), perm_.end(), 0u);
        nodes_.reserve(2 * n / kLeafSize + 2);
        root_ = build(0, n);
    }

    // k best (dist, idx) pairs excluding `self`, ordered by (dist, idx).
    void query(std::uint32_t self, std::size_t k, std::vector<DistIdx>& best) const {
        best.clear();
        best.reserve(k + 1);
        search(root_, ds_.points.row(self), self, k, best);
        std::sort(best.begin(), best.end());
    }

private:
    static constexpr std::size_t kLeafSize = 16;

    struct Node {
        std::uint32_t begin = 0, end = 0;  // leaf range into perm_
        int split_dim = -1;
        double split_val = 0.0;
        std::int32_t left = -1, right = -1;
    };

    std::int32_t build(std::size_t lo, std::size_t hi) {
        Node node;
        node.begin = static_cast<std::uint32_t>(lo);
        node.end = static_cast<std::uint32_t>(hi);
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(node);
        if (hi - lo <= kLeafSize) return id;

        // split on the dimension with the largest spread
        const std::size_t d = ds_.dim();
        int best_dim = 0;
        double best_spread = -1.0;
        for (std::size_t j = 0; j < d; ++j) {
            double mn = std::numeric_limits<double>::infinity(), mx = -mn;
            for (std::size_t i = lo; i < hi; ++i) {
                const double v = ds_.points(perm_[i], j);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            if (mx - mn > best_spread) {
                best_spread = mx - mn;
                best_dim = static_cast<int>(j);
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical: keep as leaf

        const std::size_t mid = (lo + hi) / 2;
        std::nth_element(perm_.begin() + lo, perm_.begin() + mid, perm_.begin() + hi,
                         [&](std::uint32_t a, std::uint32_t b) {
                             return ds_.points(a, best_dim) < ds_.points(b, best_dim);
                         });
        nodes_[id].split_dim = best_dim;
        nodes_[id].split_val = ds_.points(perm_[mid], best_dim);
        const std::int32_t left = build(lo, mid);
        const std::int32_t right = build(mid, hi);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void consider(const double* x, std::uint32_t self, std::size_t k,
                  std::uint32_t q, std::vector<DistIdx>& best) const {
        if (q == self) return;
        const DistIdx cand(simd::squared_distance(x, ds_.points.row(q), ds_.dim()), q);
        if (best.size() == k && !(cand < best.front())) return;
        best.push_back(cand);
        std::push_heap(best.begin(), best.end());
        if (best.size() > k) {
            std::pop_heap(best.begin(), best.end());
            best.pop_back();
        }
    }

    void search(std::int32_t id, const double* x, std::uint32_t self, std::size_t k,
                std::vector<DistIdx>& best) const {
        const Node& node = nodes_[id];
        if (node.split_dim < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i)
                consider(x, self, k, perm_[i], best);
            return;
        }
        const double diff = x[node.split_dim] - node.split_val;
        const std::int32_t near = diff < 0.0 ? node.left : node.right;
        const std::int32_t far = diff < 0.0 ? node.right : node.left;
        search(near, x, self, k, best);
        // visit the far side unless the splitting plane is strictly beyond
        // the current worst candidate (ties may still swap in a lower index)
        if (best.size() < k || diff * diff <= best.front().first)
            search(far, x, self, k, best);
    }

    const Dataset& ds_;
    std::vector<std::uint32_t> perm_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace

KnnMethod parse_knn_method(const std::string& name) {
    if (name == "exact") return KnnMethod::Exact;
    if (name == "kd-tree") return KnnMethod::KdTree;
    throw UsageError("unknown knn method '" + name + "'");
}

std::vector<std::vector<std::uint32_t>> knn_search(const Dataset& ds,
                                                   std::size_t k_n,
                                                   KnnMethod method) {
    const std::size_t n = ds.n();
    if (k_n < 1 || k_n >= n)
        throw BoundsError("k_n = " + std::to_string(k_n) +
                          " out of range for N = " + std::to_string(n));
    std::vector<std::vector<std::uint32_t>> knn(n);
    if (method == KnnMethod::Exact) {
        parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
            std::vector<DistIdx> scratch;
            scratch.reserve(n);
            for (std::size_t p = lo; p < hi; ++p)
                exact_knn_row(ds, p, k_n, scratch, knn[p]);
        });
    } else {
        KdTree tree(ds);
        parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
            std::vector<DistIdx> best;
            for (std::size_t p = lo; p < hi; ++p) {
                tree.query(static_cast<std::uint32_t>(p), k_n, best);
                knn[p].resize(k_n);
                for (std::size_t i = 0; i < k_n; ++i) knn[p][i] = best[i].second;
            }
        });
    }
    return knn;
}

SparseAffinity symmetrize_knn(const std::vector<std::vector<std::uint32_t>>& knn,
                              std::size_t n) {
    // union symmetrization, binary weights
    std::vector<std::vector<std::uint32_t>> rows(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::uint32_t q : knn[p]) {
            rows[p].push_back(q);
            rows[q].push_back(static_cast<std::uint32_t>(p));
        }
    SparseAffinity aff;
    aff.offsets.resize(n + 1, 0);
    aff.degree.resize(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        auto& r = rows[p];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        aff.offsets[p + 1] = aff.offsets[p] + static_cast<std::uint32_t>(r.size());
        aff.rho = std::max(aff.rho, r.size());
    }
    aff.neighbor_id.reserve(aff.offsets[n]);
    aff.neighbor_weight.assign(aff.offsets[n], 1.0);
    for (std::size_t p = 0; p < n; ++p) {
        aff.neighbor_id.insert(aff.neighbor_id.end(), rows[p].begin(), rows[p].end());
        aff.degree[p] = static_cast<double>(rows[p].size());
    }
    aff.shift = aff.degree.empty()
                    ? 0.0
                    : *std::max_element(aff.degree.begin(), aff.degree.end());
    return aff;
}

SparseAffinity build_knn_affinity(const Dataset& ds, std::size_t k_n,
                                  KnnMethod method) {
    return symmetrize_knn(knn_search(ds, k_n, method), ds.n());
}

KernelSpec estimate_bandwidth(const Dataset& ds,
                              const std::vector<std::vector<std::uint32_t>>& knn) {
    const std::size_t n = ds.n(), d = ds.dim();
    if (knn.size() != n) throw ShapeError("knn list count does not match dataset");
    const std::size_t k_n = knn.empty() ? 0 : knn[0].size();
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        const double* xp = ds.points.row(p);
        for (std::uint32_t q : knn[p])
            total += simd::squared_distance(xp, ds.points.row(q), d);
    }
    const double sigma2 = total / (static_cast<double>(n) * k_n);
    if (!(sigma2 > 0.0))
        throw ValidationError("degenerate bandwidth: all points identical");
    return KernelSpec{sigma2};
}

double gaussian_kernel(const double* x, const double* y, std::size_t d,
                       const KernelSpec& ks) {
    return std::exp(-simd::squared_distance(x, y, d) / (2.0 * ks.sigma2));
}

double laplacian_quadratic(const SparseAffinity& aff, const Matrix& z) {
    if (z.rows() != aff.n())
        throw ShapeError("assignment rows do not match affinity size");
    const std::size_t l = z.cols();
    double value = 0.0;
    for (std::size_t p = 0; p < aff.n(); ++p) {
        const double* zp = z.row(p);
        value += aff.degree[p] * simd::dot(zp, zp, l);
        for (std::size_t e = aff.row_begin(p); e < aff.row_end(p); ++e)
            value -= aff.neighbor_weight[e] * simd::dot(zp, z.row(aff.neighbor_id[e]), l);
    }
    return value;
}

void dump_edges(const SparseAffinity& aff, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    for (std::size_t p = 0; p < aff.n(); ++p)
        for (std::size_t e = aff.row_begin(p); e < aff.row_end(p); ++e)
            out << p << ' ' << aff.neighbor_id[e] << ' ' << aff.neighbor_weight[e]
                << '\n';
}

}  // namespace slk
