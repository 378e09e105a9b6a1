#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner-loop kernels. Each kernel has a scalar reference
// implementation and vectorized variants (AVX2+FMA on x86-64, NEON on
// aarch64); the best supported variant is selected once at runtime.
// All variants are equivalence-tested against the scalar reference.

namespace slk::simd {

enum class Isa { Scalar, Avx2, Neon };

/// ISA the dispatcher resolved to (or was forced to).
Isa active_isa();

/// Name of an ISA, for logs and traces.
std::string isa_name(Isa isa);

/// Override dispatch, primarily for equivalence tests. Throws
/// std::runtime_error if the requested ISA is not supported on this CPU.
void force_isa(Isa isa);

/// sum_i (a[i] - b[i])^2
double squared_distance(const double* a, const double* b, std::size_t n);

/// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

/// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// sum_i x[i]
double sum(const double* x, std::size_t n);

/// max_i |a[i] - b[i]|
double max_abs_diff(const double* a, const double* b, std::size_t n);

namespace scalar {
double squared_distance(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

}  // namespace slk::simd
