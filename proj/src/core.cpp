#include "slk/core.hpp"

#include <cmath>

#include "slk/simd.hpp"

namespace slk {

bool row_is_binary(const double* z, std::size_t l) {
    double mx = 0.0;
    for (std::size_t j = 0; j < l; ++j) mx = std::max(mx, z[j]);
    return mx >= 1.0 - kBinaryTol;
}

void validate_simplex(const Matrix& z) {
    for (std::size_t p = 0; p < z.rows(); ++p) {
        const double* row = z.row(p);
        double s = 0.0;
        for (std::size_t j = 0; j < z.cols(); ++j) {
            if (row[j] < -kSimplexTol || row[j] > 1.0 + kSimplexTol)
                throw DomainError("assignment entry out of [0,1] at row " +
                                  std::to_string(p));
            s += row[j];
        }
        if (std::fabs(s - 1.0) > 1e-6)
            throw DomainError("assignment row " + std::to_string(p) +
                              " is off the simplex (sum = " + std::to_string(s) + ")");
    }
}

bool ModeSet::all_indices() const {
    for (const auto& m : modes)
        if (!std::holds_alternative<std::uint32_t>(m)) return false;
    return true;
}

const double* ModeSet::vec(const Dataset& ds, std::size_t l) const {
    const Mode& m = modes[l];
    if (const auto* idx = std::get_if<std::uint32_t>(&m)) return ds.points.row(*idx);
    return std::get<std::vector<double>>(m).data();
}

void SlkConfig::validate() const {
    if (num_clusters < 2) throw UsageError("need at least 2 clusters");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw UsageError("lambda must be finite and non-negative");
    if (!(inner_tol > 0.0) || !(ms_tol > 0.0))
        throw UsageError("tolerances must be positive");
    if (inner_max < 1 || outer_max < 1 || ms_max < 1)
        throw UsageError("iteration caps must be at least 1");
}

Matrix mode_kernel_matrix(const Dataset& ds, const KernelSpec& ks,
                          const ModeSet& modes) {
    const std::size_t n = ds.n(), d = ds.dim(), l = modes.size();
    Matrix a(n, l);
    parallel_for(0, n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            double* row = a.row(p);
            const double* xp = ds.points.row(p);
            for (std::size_t c = 0; c < l; ++c)
                row[c] = gaussian_kernel(xp, modes.vec(ds, c), d, ks);
        }
    });
    return a;
}

double negative_entropy(const Matrix& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double v = z.data()[i];
        if (v > 0.0) s += v * std::log(v);
    }
    return s;
}

namespace {

double mode_affinity_term(const Matrix& z, const Matrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < z.rows(); ++p)
        s += simd::dot(z.row(p), a.row(p), z.cols());
    return s;
}

// sum_{p,q} k~(x_p,x_q) z_p^t z_q with the shifted affinity K + delta*I
double shifted_pairwise_term(const SparseAffinity& aff, const Matrix& z) {
    const std::size_t l = z.cols();
    double s = 0.0;
    for (std::size_t p = 0; p < aff.n(); ++p) {
        const double* zp = z.row(p);
        for (std::size_t e = aff.row_begin(p); e < aff.row_end(p); ++e)
            s += aff.neighbor_weight[e] * simd::dot(zp, z.row(aff.neighbor_id[e]), l);
        s += aff.shift * simd::dot(zp, zp, l);
    }
    return s;
}

}  // namespace

double discrete_objective(const Dataset& ds, const SparseAffinity& aff,
                          const KernelSpec& ks, const Matrix& z,
                          const ModeSet& modes, double lambda) {
    if (z.rows() != ds.n() || z.rows() != aff.n())
        throw ShapeError("assignment matrix does not match dataset/affinity");
    for (std::size_t p = 0; p < z.rows(); ++p)
        if (!row_is_binary(z.row(p), z.cols()))
            throw DomainError("discrete objective requires binary rows (row " +
                              std::to_string(p) + ")");
    const Matrix a = mode_kernel_matrix(ds, ks, modes);
    return -mode_affinity_term(z, a) + lambda * laplacian_quadratic(aff, z);
}

double relaxed_objective(const Dataset& ds, const SparseAffinity& aff,
                         const KernelSpec& ks, const Matrix& z,
                         const ModeSet& modes, double lambda) {
    if (z.rows() != ds.n() || z.rows() != aff.n())
        throw ShapeError("assignment matrix does not match dataset/affinity");
    validate_simplex(z);
    const Matrix a = mode_kernel_matrix(ds, ks, modes);
    return negative_entropy(z) - mode_affinity_term(z, a) -
           lambda * shifted_pairwise_term(aff, z);
}

double auxiliary_value(const Matrix& z, const Matrix& a, const Matrix& b,
                       double lambda) {
    if (a.rows() != z.rows() || a.cols() != z.cols() || b.rows() != z.rows() ||
        b.cols() != z.cols())
        throw ShapeError("auxiliary buffers do not match assignment matrix");
    double s = negative_entropy(z);
    for (std::size_t p = 0; p < z.rows(); ++p) {
        const double* zp = z.row(p);
        s -= simd::dot(zp, a.row(p), z.cols());
        s -= lambda * simd::dot(zp, b.row(p), z.cols());
    }
    return s;
}

}  // namespace slk
