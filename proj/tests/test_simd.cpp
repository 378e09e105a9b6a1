#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "slk/simd.hpp"

using namespace slk;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> gauss(0.0, 3.0);
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels match hand computations") {
    const double a[] = {1.0, 2.0, 3.0};
    const double b[] = {0.0, 2.0, 5.0};
    CHECK(simd::scalar::squared_distance(a, b, 3) == doctest::Approx(5.0));
    CHECK(simd::scalar::dot(a, b, 3) == doctest::Approx(19.0));
    CHECK(simd::scalar::sum(a, 3) == doctest::Approx(6.0));
    CHECK(simd::scalar::max_abs_diff(a, b, 3) == doctest::Approx(2.0));
    double y[] = {1.0, 1.0, 1.0};
    simd::scalar::axpy(2.0, a, y, 3);
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[2] == doctest::Approx(7.0));
}

TEST_CASE("vector variants agree with the scalar reference") {
    const simd::Isa detected = simd::active_isa();
    if (detected == simd::Isa::Scalar) {
        MESSAGE("no vector ISA on this CPU; dispatch equivalence is trivial");
        return;
    }
    std::mt19937_64 rng(7);
    // odd lengths exercise the scalar tails
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 33u, 100u, 784u}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        simd::force_isa(detected);
        const double d2_v = simd::squared_distance(a.data(), b.data(), n);
        const double dot_v = simd::dot(a.data(), b.data(), n);
        const double sum_v = simd::sum(a.data(), n);
        const double mad_v = simd::max_abs_diff(a.data(), b.data(), n);
        auto y_v = b;
        simd::axpy(1.7, a.data(), y_v.data(), n);

        const double d2_s = simd::scalar::squared_distance(a.data(), b.data(), n);
        const double dot_s = simd::scalar::dot(a.data(), b.data(), n);
        const double sum_s = simd::scalar::sum(a.data(), n);
        const double mad_s = simd::scalar::max_abs_diff(a.data(), b.data(), n);
        auto y_s = b;
        simd::scalar::axpy(1.7, a.data(), y_s.data(), n);

        // FMA reassociation changes rounding, so compare with a tight
        // relative tolerance rather than bit-exactly
        CHECK(d2_v == doctest::Approx(d2_s).epsilon(1e-13));
        CHECK(dot_v == doctest::Approx(dot_s).epsilon(1e-12));
        CHECK(sum_v == doctest::Approx(sum_s).epsilon(1e-13));
        CHECK(mad_v == doctest::Approx(mad_s).epsilon(1e-14));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-13));
    }
}

TEST_CASE("force_isa rejects unsupported targets") {
#if !defined(__aarch64__) && !defined(__ARM_NEON)
    CHECK_THROWS(simd::force_isa(simd::Isa::Neon));
#endif
    CHECK_NOTHROW(simd::force_isa(simd::Isa::Scalar));
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    // restore the detected ISA for any tests that follow in this binary
    for (auto isa : {simd::Isa::Avx2, simd::Isa::Neon}) {
        try {
            simd::force_isa(isa);
            break;
        } catch (...) {
        }
    }
}
