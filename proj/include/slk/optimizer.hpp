#pragma once

#include <string>
#include <vector>

#include "slk/affinity.hpp"
#include "slk/core.hpp"
#include "slk/dataset.hpp"

namespace slk {

/// Per-point linearization buffers at the snapshot (Z^i, M^i):
/// a[p][l] = k(x_p, m_l), b[p][l] = sum_q k~(x_p,x_q) z_{q,l}
/// (shifted affinity: the delta*I diagonal contributes delta * z_p).
struct UpdateBuffers {
    Matrix a;
    Matrix b;
};

/// Objective history, one record per inner iteration plus per-outer
/// summaries. Feeds the convergence-plot CSV.
struct Trace {
    struct Inner {
        std::size_t outer = 0;
        std::size_t inner = 0;
        double relaxed = 0.0;
        double max_row_delta = 0.0;
    };
    struct Outer {
        std::size_t outer = 0;
        std::size_t inner_iters = 0;
        double relaxed = 0.0;
        double discrete = 0.0;       // of the hardened assignment
        double mode_change = 0.0;    // MS: max displacement; BO: #changed indices
    };
    std::vector<Inner> inner;
    std::vector<Outer> outer;

    void write_csv(const std::string& path) const;
};

UpdateBuffers build_update_vectors(const Dataset& ds, const SparseAffinity& aff,
                                   const KernelSpec& ks, const Matrix& z,
                                   const ModeSet& modes);

/// Closed-form minimizer of the per-point bound: each row of the result is
/// softmax(a_p + lambda b_p), evaluated with max-subtraction.
Matrix z_update(const UpdateBuffers& buffers, double lambda);

/// z_p = softmax(a_p): the lambda = 0 update from the initial modes.
Matrix initialize_z(const Dataset& ds, const KernelSpec& ks, const ModeSet& modes);

/// Jacobi bound-optimization loop: rebuild b from the previous snapshot and
/// apply z_update until max_p ||z_p' - z_p||_inf < inner_tol or inner_max
/// iterations. Appends to trace; the relaxed objective is non-increasing.
Matrix inner_loop(const Dataset& ds, const SparseAffinity& aff,
                  const KernelSpec& ks, Matrix z, const ModeSet& modes,
                  const SlkConfig& cfg, std::size_t outer_iter, Trace& trace);

/// argmax per row, lowest index on ties.
std::vector<int> harden(const Matrix& z);

struct ClusterResult {
    std::vector<int> labels;
    Matrix z;
    ModeSet modes;
    Trace trace;
    double relaxed_obj = 0.0;
    double discrete_obj = 0.0;
    std::size_t outer_iters = 0;
    bool converged = false;
    double sigma2 = 0.0;
};

/// Full driver: kNN affinity + bandwidth + K-means++ seeded modes, then
/// alternating z-updates and mode updates until the modes stop changing
/// (or outer_max). Needs N > L.
ClusterResult run_slk(const Dataset& ds, const SlkConfig& cfg);

/// Same, with a prebuilt graph/bandwidth (the CLI builds these once).
ClusterResult run_slk(const Dataset& ds, const SparseAffinity& aff,
                      const KernelSpec& ks, const SlkConfig& cfg);

}  // namespace slk
