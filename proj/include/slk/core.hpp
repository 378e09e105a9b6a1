#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "slk/affinity.hpp"
#include "slk/common.hpp"
#include "slk/dataset.hpp"

namespace slk {

constexpr double kSimplexTol = 1e-9;
constexpr double kBinaryTol = 1e-9;

/// N x L row-stochastic soft assignments.
using AssignmentMatrix = Matrix;

/// A row is binary if its maximum entry is within kBinaryTol of 1.
bool row_is_binary(const double* z, std::size_t l);

/// Throws DomainError if any row of z is off the simplex beyond tolerance.
void validate_simplex(const Matrix& z);

/// A cluster mode: either an index into the dataset (byproduct updates keep
/// modes as valid data points) or a free vector (mean-shift iterates).
using Mode = std::variant<std::uint32_t, std::vector<double>>;

struct ModeSet {
    std::vector<Mode> modes;

    std::size_t size() const { return modes.size(); }
    bool all_indices() const;

    /// Pointer to the mode's D-vector (dataset row for index modes).
    const double* vec(const Dataset& ds, std::size_t l) const;
};

enum class ModeVariant { MeanShift, Byproduct };

struct SlkConfig {
    std::size_t num_clusters = 2;
    double lambda = 2.0;
    std::size_t k_n = 5;
    KnnMethod knn_method = KnnMethod::Exact;
    ModeVariant mode_variant = ModeVariant::Byproduct;
    double inner_tol = 1e-6;
    std::size_t inner_max = 100;
    std::size_t outer_max = 50;
    double ms_tol = 1e-6;
    std::size_t ms_max = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// a[p][l] = k(x_p, m_l) under the Gaussian kernel; the mode-affinity
/// matrix shared by the objectives and the bound updates.
Matrix mode_kernel_matrix(const Dataset& ds, const KernelSpec& ks,
                          const ModeSet& modes);

/// Discrete objective on binary assignments, unshifted weights:
/// E(Z) = -sum_{p,l} z_{p,l} k(x_p,m_l) + lambda * tr(Z^t L Z).
double discrete_objective(const Dataset& ds, const SparseAffinity& aff,
                          const KernelSpec& ks, const Matrix& z,
                          const ModeSet& modes, double lambda);

/// Relaxed objective with the shifted affinity K + delta*I:
/// R(Z) = sum_p z_p^t log z_p - sum_{p,l} z_{p,l} k(x_p,m_l)
///        - lambda * sum_{p,q} k~(x_p,x_q) z_p^t z_q,
/// with the 0 log 0 = 0 convention.
double relaxed_objective(const Dataset& ds, const SparseAffinity& aff,
                         const KernelSpec& ks, const Matrix& z,
                         const ModeSet& modes, double lambda);

/// Bound value at Z for fixed per-point linearization vectors a, b:
/// A(Z) = sum_p z_p^t (log z_p - a_p - lambda b_p), without the additive
/// constant that makes it tight at the expansion point.
double auxiliary_value(const Matrix& z, const Matrix& a, const Matrix& b,
                       double lambda);

/// sum_p z_p^t log z_p with 0 log 0 = 0.
double negative_entropy(const Matrix& z);

}  // namespace slk
