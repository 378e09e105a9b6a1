#include "slk/simd.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#define SLK_X86 1
#include <immintrin.h>
#else
#define SLK_X86 0
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define SLK_NEON 1
#include <arm_neon.h>
#else
#define SLK_NEON 0
#endif

namespace slk::simd {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace scalar {

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace scalar

// ---------------------------------------------------------------------------
// AVX2 + FMA kernels
// ---------------------------------------------------------------------------

#if SLK_X86

namespace avx2 {

__attribute__((target("avx2,fma"))) static double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma")))
double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

__attribute__((target("avx2,fma")))
double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

__attribute__((target("avx2,fma")))
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma")))
double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

__attribute__((target("avx2,fma")))
double max_abs_diff(const double* a, const double* b, std::size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(sign_mask, d));
    }
    double buf[4];
    _mm256_storeu_pd(buf, vmax);
    double m = buf[0];
    for (int k = 1; k < 4; ++k)
        if (buf[k] > m) m = buf[k];
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace avx2

#endif  // SLK_X86

// ---------------------------------------------------------------------------
// NEON kernels
// ---------------------------------------------------------------------------

#if SLK_NEON

namespace neon {

double squared_distance(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    float64x2_t vmax = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        vmax = vmaxq_f64(vmax, d);
    }
    double m = vmaxvq_f64(vmax);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace neon

#endif  // SLK_NEON

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace {

struct KernelTable {
    double (*squared_distance)(const double*, const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
};

constexpr KernelTable kScalarTable = {
    scalar::squared_distance, scalar::dot, scalar::axpy,
    scalar::sum, scalar::max_abs_diff};

#if SLK_X86
constexpr KernelTable kAvx2Table = {
    avx2::squared_distance, avx2::dot, avx2::axpy,
    avx2::sum, avx2::max_abs_diff};
#endif

#if SLK_NEON
constexpr KernelTable kNeonTable = {
    neon::squared_distance, neon::dot, neon::axpy,
    neon::sum, neon::max_abs_diff};
#endif

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if SLK_X86
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
            return SLK_NEON != 0;
    }
    return false;
}

Isa detect_isa() {
    if (const char* env = std::getenv("SLK_FORCE_SCALAR"); env && env[0] == '1')
        return Isa::Scalar;
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
#if SLK_X86
        case Isa::Avx2:
            return &kAvx2Table;
#endif
#if SLK_NEON
        case Isa::Neon:
            return &kNeonTable;
#endif
        default:
            return &kScalarTable;
    }
}

Isa g_isa = detect_isa();
const KernelTable* g_table = table_for(g_isa);

}  // namespace

Isa active_isa() { return g_isa; }

std::string isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

void force_isa(Isa isa) {
    if (!isa_supported(isa))
        throw std::runtime_error("ISA not supported on this CPU: " + isa_name(isa));
    g_isa = isa;
    g_table = table_for(isa);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return g_table->squared_distance(a, b, n);
}
double dot(const double* a, const double* b, std::size_t n) {
    return g_table->dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    g_table->axpy(alpha, x, y, n);
}
double sum(const double* x, std::size_t n) { return g_table->sum(x, n); }
double max_abs_diff(const double* a, const double* b, std::size_t n) {
    return g_table->max_abs_diff(a, b, n);
}

}  // namespace slk::simd
