#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slk/common.hpp"
#include "slk/dataset.hpp"

namespace slk {

/// Gaussian kernel bandwidth, as squared sigma.
struct KernelSpec {
    double sigma2 = 1.0;
};

/// Symmetric binary kNN affinity graph in CSR form. The diagonal is never
/// stored; the PSD shift delta is kept separately and applied where the
/// shifted affinity K + delta*I is required.
struct SparseAffinity {
    std::vector<std::uint32_t> offsets;      // length n+1
    std::vector<std::uint32_t> neighbor_id;  // column indices, sorted per row
    std::vector<double> neighbor_weight;     // binary weights (1.0)
    std::vector<double> degree;              // d_p = sum of row weights
    double shift = 0.0;                      // delta, = max_p d_p
    std::size_t rho = 0;                     // max row length

    std::size_t n() const { return degree.size(); }
    std::size_t row_begin(std::size_t p) const { return offsets[p]; }
    std::size_t row_end(std::size_t p) const { return offsets[p + 1]; }
};

enum class KnnMethod { Exact, KdTree };

KnnMethod parse_knn_method(const std::string& name);

/// Directed k-nearest-neighbor lists (self excluded), k_n entries per point
/// sorted by increasing distance, ties broken by lower index. The exact
/// method is O(N^2 D) full pairwise search; kd-tree prunes by bounding
/// boxes and returns the same lists.
std::vector<std::vector<std::uint32_t>> knn_search(const Dataset& ds,
                                                   std::size_t k_n,
                                                   KnnMethod method);

/// Union-symmetrized binary affinity built from directed lists.
SparseAffinity symmetrize_knn(const std::vector<std::vector<std::uint32_t>>& knn,
                              std::size_t n);

/// knn_search + symmetrize_knn.
SparseAffinity build_knn_affinity(const Dataset& ds, std::size_t k_n,
                                  KnnMethod method = KnnMethod::Exact);

/// sigma^2 = (1 / (N k_n)) sum_p sum_{q in N_p^{k_n}} ||x_p - x_q||^2,
/// over the directed (pre-union) lists. Throws if the estimate degenerates
/// to zero (all points identical).
KernelSpec estimate_bandwidth(const Dataset& ds,
                              const std::vector<std::vector<std::uint32_t>>& knn);

/// exp(-||x - y||^2 / (2 sigma^2))
double gaussian_kernel(const double* x, const double* y, std::size_t d,
                       const KernelSpec& ks);

/// tr(Z^t L Z) with the unshifted binary weights:
/// sum_p d_p z_p^t z_p - sum_{p,q} k(x_p,x_q) z_p^t z_q.
double laplacian_quadratic(const SparseAffinity& aff, const Matrix& z);

/// Debug dump, one "p q w" line per stored (directed) edge.
void dump_edges(const SparseAffinity& aff, const std::string& path);

}  // namespace slk
