#pragma once

#include <cstdint>
#include <vector>

#include "slk/affinity.hpp"
#include "slk/core.hpp"
#include "slk/dataset.hpp"

namespace slk {

/// Weighted KDE of cluster l at point y:
/// P_l(y) = sum_q k(y, x_q) z_{q,l} / sum_q z_{q,l}.
double kde_at(const Dataset& ds, const KernelSpec& ks,
              const std::vector<double>& z_col, const double* y);

/// Fixed-point mean-shift iterations from m_start:
/// m <- sum_p z_{p,l} k(x_p,m) x_p / sum_p z_{p,l} k(x_p,m),
/// stopping when ||dm|| < ms_tol * sigma or after ms_max iterations.
/// The weighted KDE value is non-decreasing across iterates.
std::vector<double> mean_shift_mode(const Dataset& ds, const KernelSpec& ks,
                                    const std::vector<double>& z_col,
                                    const std::vector<double>& m_start,
                                    double ms_tol, std::size_t ms_max);

/// Byproduct mode: index of the row maximizing column l of z, lowest index
/// on ties. O(N).
std::uint32_t byproduct_mode(const Matrix& z, std::size_t l);

enum class ModeCandidates { All, ClusterMembers };

/// Exact maximizer of k(y, m_prev) + sum_p z_{p,l} k(x_p, y) over candidate
/// data points; pass m_prev = nullptr to drop the proximity term. Used for
/// initialization and as a test oracle; O(C*N*D) for C candidates.
std::uint32_t hard_max_mode_oracle(const Dataset& ds, const KernelSpec& ks,
                                   const std::vector<double>& z_col,
                                   const double* m_prev,
                                   const std::vector<std::uint32_t>& candidates);

}  // namespace slk
