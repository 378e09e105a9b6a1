#include "slk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "slk/metrics.hpp"
#include "slk/modes.hpp"
#include "slk/simd.hpp"

namespace slk {

void Trace::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out.precision(17);
    out << "outer_iter,inner_iter,relaxed_obj,discrete_obj,max_row_delta,mode_change\n";
    std::size_t oi = 0;
    for (const auto& rec : inner) {
        while (oi < outer.size() && outer[oi].outer < rec.outer) {
            const auto& o = outer[oi++];
            out << o.outer << ",," << o.relaxed << ',' << o.discrete << ",,"
                << o.mode_change << '\n';
        }
        out << rec.outer << ',' << rec.inner << ',' << rec.relaxed << ",,"
            << rec.max_row_delta << ",\n";
    }
    for (; oi < outer.size(); ++oi) {
        const auto& o = outer[oi];
        out << o.outer << ",," << o.relaxed << ',' << o.discrete << ",,"
            << o.mode_change << '\n';
    }
}

UpdateBuffers build_update_vectors(const Dataset& ds, const SparseAffinity& aff,
                                   const KernelSpec& ks, const Matrix& z,
                                   const ModeSet& modes) {
    if (z.rows() != ds.n() || z.rows() != aff.n())
        throw ShapeError("assignment matrix does not match dataset/affinity");
    UpdateBuffers buf;
    buf.a = mode_kernel_matrix(ds, ks, modes);
    const std::size_t l = z.cols();
    buf.b = Matrix(z.rows(), l, 0.0);
    parallel_for(0, z.rows(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            double* bp = buf.b.row(p);
            for (std::size_t e = aff.row_begin(p); e < aff.row_end(p); ++e)
                simd::axpy(aff.neighbor_weight[e], z.row(aff.neighbor_id[e]), bp, l);
            simd::axpy(aff.shift, z.row(p), bp, l);
        }
    });
    return buf;
}

namespace {

void softmax_row(const double* logits, double* out, std::size_t l) {
    double mx = logits[0];
    for (std::size_t j = 1; j < l; ++j) mx = std::max(mx, logits[j]);
    double denom = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
        out[j] = std::exp(logits[j] - mx);
        denom += out[j];
    }
    for (std::size_t j = 0; j < l; ++j) out[j] /= denom;
}

}  // namespace

Matrix z_update(const UpdateBuffers& buffers, double lambda) {
    const std::size_t n = buffers.a.rows(), l = buffers.a.cols();
    if (buffers.b.rows() != n || buffers.b.cols() != l)
        throw ShapeError("update buffers have mismatched shapes");
    Matrix z(n, l);
    parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> logits(l);
        for (std::size_t p = lo; p < hi; ++p) {
            const double* ap = buffers.a.row(p);
            const double* bp = buffers.b.row(p);
            for (std::size_t j = 0; j < l; ++j) logits[j] = ap[j] + lambda * bp[j];
            softmax_row(logits.data(), z.row(p), l);
        }
    });
    return z;
}

Matrix initialize_z(const Dataset& ds, const KernelSpec& ks, const ModeSet& modes) {
    const Matrix a = mode_kernel_matrix(ds, ks, modes);
    Matrix z(a.rows(), a.cols());
    for (std::size_t p = 0; p < a.rows(); ++p)
        softmax_row(a.row(p), z.row(p), a.cols());
    return z;
}

Matrix inner_loop(const Dataset& ds, const SparseAffinity& aff,
                  const KernelSpec& ks, Matrix z, const ModeSet& modes,
                  const SlkConfig& cfg, std::size_t outer_iter, Trace& trace) {
    trace.inner.push_back({outer_iter, 0,
                           relaxed_objective(ds, aff, ks, z, modes, cfg.lambda),
                           0.0});
    for (std::size_t it = 1; it <= cfg.inner_max; ++it) {
        const UpdateBuffers buf = build_update_vectors(ds, aff, ks, z, modes);
        // The pairwise term is quadratic in z, so its tangent at the snapshot
        // carries coefficient 2*lambda on b; with it the softmax step is an
        // exact majorize-minimize update and the relaxed objective cannot
        // increase.
        Matrix next = z_update(buf, 2.0 * cfg.lambda);
        double delta = 0.0;
        for (std::size_t p = 0; p < z.rows(); ++p)
            delta = std::max(delta,
                             simd::max_abs_diff(next.row(p), z.row(p), z.cols()));
        z = std::move(next);
        trace.inner.push_back({outer_iter, it,
                               relaxed_objective(ds, aff, ks, z, modes, cfg.lambda),
                               delta});
        if (delta < cfg.inner_tol) break;
    }
    return z;
}

std::vector<int> harden(const Matrix& z) {
    std::vector<int> labels(z.rows());
    for (std::size_t p = 0; p < z.rows(); ++p) {
        const double* row = z.row(p);
        int best = 0;
        for (std::size_t j = 1; j < z.cols(); ++j)
            if (row[j] > row[best]) best = static_cast<int>(j);
        labels[p] = best;
    }
    return labels;
}

namespace {

Matrix binary_from_labels(const std::vector<int>& labels, std::size_t l) {
    Matrix z(labels.size(), l, 0.0);
    for (std::size_t p = 0; p < labels.size(); ++p) z(p, labels[p]) = 1.0;
    return z;
}

std::vector<double> column(const Matrix& z, std::size_t l) {
    std::vector<double> col(z.rows());
    for (std::size_t p = 0; p < z.rows(); ++p) col[p] = z(p, l);
    return col;
}

// Initial byproduct modes: hard max over each seed cluster's members with
// the proximity term dropped (no previous mode exists yet).
ModeSet initial_byproduct_modes(const Dataset& ds, const KernelSpec& ks,
                                const Matrix& z0,
                                const std::vector<std::uint32_t>& seeds) {
    const std::vector<int> labels = harden(z0);
    ModeSet modes;
    modes.modes.resize(seeds.size());
    parallel_for(0, seeds.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t l = lo; l < hi; ++l) {
            std::vector<std::uint32_t> members;
            for (std::size_t p = 0; p < ds.n(); ++p)
                if (labels[p] == static_cast<int>(l))
                    members.push_back(static_cast<std::uint32_t>(p));
            if (members.empty()) {
                modes.modes[l] = seeds[l];
            } else {
                modes.modes[l] =
                    hard_max_mode_oracle(ds, ks, column(z0, l), nullptr, members);
            }
        }
    });
    return modes;
}

}  // namespace

ClusterResult run_slk(const Dataset& ds, const SlkConfig& cfg) {
    cfg.validate();
    if (ds.n() <= cfg.num_clusters)
        throw UsageError("need more points than clusters (N = " +
                         std::to_string(ds.n()) + ", L = " +
                         std::to_string(cfg.num_clusters) + ")");
    const auto knn = knn_search(ds, cfg.k_n, cfg.knn_method);
    const KernelSpec ks = estimate_bandwidth(ds, knn);
    const SparseAffinity aff = symmetrize_knn(knn, ds.n());
    return run_slk(ds, aff, ks, cfg);
}

ClusterResult run_slk(const Dataset& ds, const SparseAffinity& aff,
                      const KernelSpec& ks, const SlkConfig& cfg) {
    cfg.validate();
    const std::size_t n = ds.n(), num_l = cfg.num_clusters;
    if (n <= num_l)
        throw UsageError("need more points than clusters (N = " +
                         std::to_string(n) + ", L = " + std::to_string(num_l) + ")");
    if (!(ks.sigma2 > 0.0)) throw UsageError("degenerate kernel bandwidth");
    const double sigma = std::sqrt(ks.sigma2);

    const std::vector<std::uint32_t> seeds = kmeanspp_seeds(ds, num_l, cfg.seed);
    ModeSet modes;
    modes.modes.reserve(num_l);
    for (std::uint32_t s : seeds) {
        if (cfg.mode_variant == ModeVariant::Byproduct) {
            modes.modes.emplace_back(s);
        } else {
            const double* x = ds.points.row(s);
            modes.modes.emplace_back(std::vector<double>(x, x + ds.dim()));
        }
    }
    Matrix z = initialize_z(ds, ks, modes);
    if (cfg.mode_variant == ModeVariant::Byproduct) {
        modes = initial_byproduct_modes(ds, ks, z, seeds);
        z = initialize_z(ds, ks, modes);
    }

    ClusterResult res;
    res.sigma2 = ks.sigma2;
    bool converged = false;
    std::size_t outer = 0;
    while (outer < cfg.outer_max && !converged) {
        ++outer;
        z = inner_loop(ds, aff, ks, z, modes, cfg, outer, res.trace);

        // empty-cluster rescue: reseed starved modes at the most ambiguous point
        bool rescued = false;
        for (std::size_t l = 0; l < num_l; ++l) {
            double mass = 0.0;
            for (std::size_t p = 0; p < n; ++p) mass += z(p, l);
            if (mass < 1e-6 * static_cast<double>(n) / num_l) {
                std::size_t weakest = 0;
                double weakest_max = 2.0;
                for (std::size_t p = 0; p < n; ++p) {
                    const double* row = z.row(p);
                    double mx = row[0];
                    for (std::size_t j = 1; j < num_l; ++j) mx = std::max(mx, row[j]);
                    if (mx < weakest_max) {
                        weakest_max = mx;
                        weakest = p;
                    }
                }
                if (cfg.mode_variant == ModeVariant::Byproduct) {
                    modes.modes[l] = static_cast<std::uint32_t>(weakest);
                } else {
                    const double* x = ds.points.row(weakest);
                    modes.modes[l] = std::vector<double>(x, x + ds.dim());
                }
                rescued = true;
            }
        }

        double mode_change = 0.0;
        if (!rescued) {
            if (cfg.mode_variant == ModeVariant::Byproduct) {
                std::size_t changed = 0;
                for (std::size_t l = 0; l < num_l; ++l) {
                    const std::uint32_t next = byproduct_mode(z, l);
                    if (std::get<std::uint32_t>(modes.modes[l]) != next) {
                        modes.modes[l] = next;
                        ++changed;
                    }
                }
                mode_change = static_cast<double>(changed);
                converged = changed == 0;
            } else {
                std::vector<double> displacement(num_l, 0.0);
                parallel_for(0, num_l, [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t l = lo; l < hi; ++l) {
                        const auto& cur = std::get<std::vector<double>>(modes.modes[l]);
                        std::vector<double> next = mean_shift_mode(
                            ds, ks, column(z, l), cur, cfg.ms_tol, cfg.ms_max);
                        displacement[l] = std::sqrt(simd::squared_distance(
                            next.data(), cur.data(), ds.dim()));
                        modes.modes[l] = std::move(next);
                    }
                });
                mode_change = *std::max_element(displacement.begin(),
                                                displacement.end());
                converged = mode_change < cfg.ms_tol * sigma;
            }
        }

        const std::vector<int> hard = harden(z);
        const Matrix zb = binary_from_labels(hard, num_l);
        std::size_t inner_iters = 0;
        for (const auto& rec : res.trace.inner)
            if (rec.outer == outer) inner_iters = rec.inner;
        res.trace.outer.push_back(
            {outer, inner_iters,
             relaxed_objective(ds, aff, ks, z, modes, cfg.lambda),
             discrete_objective(ds, aff, ks, zb, modes, cfg.lambda), mode_change});
    }

    res.labels = harden(z);
    res.relaxed_obj = relaxed_objective(ds, aff, ks, z, modes, cfg.lambda);
    res.discrete_obj = discrete_objective(
        ds, aff, ks, binary_from_labels(res.labels, num_l), modes, cfg.lambda);
    res.z = std::move(z);
    res.modes = std::move(modes);
    res.outer_iters = outer;
    res.converged = converged;
    return res;
}

}  // namespace slk
