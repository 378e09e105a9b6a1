#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slk/core.hpp"
#include "slk/optimizer.hpp"

using namespace slk;

namespace {

struct Toy {
    Dataset ds;
    SparseAffinity aff;
    KernelSpec ks;
};

Toy make_toy(std::mt19937_64& rng, std::size_t n, std::size_t k_n) {
    Toy t;
    t.ds = oracles::random_dataset(rng, n, 2);
    const auto knn = knn_search(t.ds, k_n, KnnMethod::Exact);
    t.ks = estimate_bandwidth(t.ds, knn);
    t.aff = symmetrize_knn(knn, n);
    return t;
}

ModeSet index_modes(std::initializer_list<std::uint32_t> ids) {
    ModeSet m;
    for (std::uint32_t i : ids) m.modes.emplace_back(i);
    return m;
}

double sum_shifted_degrees(const SparseAffinity& aff) {
    double s = 0.0;
    for (double d : aff.degree) s += d + aff.shift;
    return s;
}

}  // namespace

TEST_CASE("discrete objective") {
    std::mt19937_64 rng(11);
    const Toy t = make_toy(rng, 12, 3);

    SUBCASE("single cluster: pairwise term vanishes") {
        Matrix z(12, 1, 1.0);
        const ModeSet m = index_modes({4});
        double expected = 0.0;
        for (std::size_t p = 0; p < 12; ++p)
            expected -= gaussian_kernel(t.ds.points.row(p), t.ds.points.row(4), 2, t.ks);
        CHECK(discrete_objective(t.ds, t.aff, t.ks, z, m, 3.0) ==
              doctest::Approx(expected));
    }

    SUBCASE("matches exhaustive double-loop expansion") {
        const Matrix z = oracles::random_binary_matrix(rng, 12, 2);
        const ModeSet m = index_modes({0, 7});
        const double lambda = 1.5;
        // brute force: -sum z a + (lambda/2) sum_{p,q} k ||z_p - z_q||^2
        const Matrix k = oracles::dense_affinity(t.aff);
        double expected = 0.0;
        for (std::size_t p = 0; p < 12; ++p)
            for (std::size_t l = 0; l < 2; ++l)
                expected -= z(p, l) * gaussian_kernel(t.ds.points.row(p),
                                                      m.vec(t.ds, l), 2, t.ks);
        for (std::size_t p = 0; p < 12; ++p)
            for (std::size_t q = 0; q < 12; ++q) {
                double norm2 = 0.0;
                for (std::size_t l = 0; l < 2; ++l) {
                    const double d = z(p, l) - z(q, l);
                    norm2 += d * d;
                }
                expected += 0.5 * lambda * k(p, q) * norm2;
            }
        CHECK(discrete_objective(t.ds, t.aff, t.ks, z, m, lambda) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("lambda = 0 leaves only the mode term") {
        const Matrix z = oracles::random_binary_matrix(rng, 12, 2);
        const ModeSet m = index_modes({1, 2});
        double expected = 0.0;
        for (std::size_t p = 0; p < 12; ++p)
            for (std::size_t l = 0; l < 2; ++l)
                expected -= z(p, l) * gaussian_kernel(t.ds.points.row(p),
                                                      m.vec(t.ds, l), 2, t.ks);
        CHECK(discrete_objective(t.ds, t.aff, t.ks, z, m, 0.0) ==
              doctest::Approx(expected));
    }

    SUBCASE("rejects non-binary rows") {
        Matrix z(12, 2, 0.5);
        CHECK_THROWS_AS(discrete_objective(t.ds, t.aff, t.ks, z, index_modes({0, 1}), 1.0),
                        DomainError);
    }
}

TEST_CASE("vertex identity: R(Z) = E(Z) - lambda * sum d~_p for binary Z") {
    std::mt19937_64 rng(12);
    const Toy t = make_toy(rng, 20, 3);
    const ModeSet m = index_modes({0, 5, 9});
    const double dsum = sum_shifted_degrees(t.aff);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix z = oracles::random_binary_matrix(rng, 20, 3);
        const double lambda = 0.5 * trial;
        const double r = relaxed_objective(t.ds, t.aff, t.ks, z, m, lambda);
        const double e = discrete_objective(t.ds, t.aff, t.ks, z, m, lambda);
        CHECK(std::fabs(r - (e - lambda * dsum)) < 1e-9);
    }
}

TEST_CASE("relaxed objective on uniform rows with constant mode kernels") {
    // points on a circle, both modes at the center: k(x_p, m_l) = c for all
    const std::size_t n = 8;
    Dataset ds;
    ds.points = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * 3.14159265358979 * i / n;
        ds.points(i, 0) = 2.0 * std::cos(a);
        ds.points(i, 1) = 2.0 * std::sin(a);
    }
    const auto knn = knn_search(ds, 2, KnnMethod::Exact);
    const KernelSpec ks = estimate_bandwidth(ds, knn);
    const SparseAffinity aff = symmetrize_knn(knn, n);
    ModeSet m;
    m.modes.emplace_back(std::vector<double>{0.0, 0.0});
    m.modes.emplace_back(std::vector<double>{0.0, 0.0});
    const double c = std::exp(-4.0 / (2.0 * ks.sigma2));
    Matrix z(n, 2, 0.5);
    const double expected = n * (-std::log(2.0)) - n * c;
    CHECK(relaxed_objective(ds, aff, ks, z, m, 0.0) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("entropy convention: continuous as entries approach zero") {
    std::mt19937_64 rng(13);
    const Toy t = make_toy(rng, 10, 2);
    const ModeSet m = index_modes({0, 3});
    Matrix z0(10, 2, 0.0);
    for (std::size_t p = 0; p < 10; ++p) z0(p, 0) = 1.0;
    const double at_vertex = relaxed_objective(t.ds, t.aff, t.ks, z0, m, 1.0);
    double prev_gap = 1e300;
    for (double eps : {1e-4, 1e-8, 1e-12}) {
        Matrix z(10, 2);
        for (std::size_t p = 0; p < 10; ++p) {
            z(p, 0) = 1.0 - eps;
            z(p, 1) = eps;
        }
        const double gap =
            std::fabs(relaxed_objective(t.ds, t.aff, t.ks, z, m, 1.0) - at_vertex);
        CHECK(gap < prev_gap + 1e-15);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-9);
}

TEST_CASE("relaxed objective rejects off-simplex rows") {
    std::mt19937_64 rng(14);
    const Toy t = make_toy(rng, 6, 2);
    Matrix z(6, 2, 0.9);
    CHECK_THROWS_AS(relaxed_objective(t.ds, t.aff, t.ks, z, index_modes({0, 1}), 1.0),
                    DomainError);
}

TEST_CASE("auxiliary value") {
    std::mt19937_64 rng(15);
    SUBCASE("a = b = 0 reduces to negative entropy") {
        const Matrix z = oracles::random_simplex_matrix(rng, 7, 3);
        const Matrix zeros(7, 3, 0.0);
        const double v = auxiliary_value(z, zeros, zeros, 2.0);
        CHECK(v == doctest::Approx(negative_entropy(z)));
        CHECK(v <= 0.0);
    }
    SUBCASE("zero iff all rows binary") {
        const Matrix zb = oracles::random_binary_matrix(rng, 7, 3);
        const Matrix zeros(7, 3, 0.0);
        CHECK(auxiliary_value(zb, zeros, zeros, 1.0) == doctest::Approx(0.0));
    }
    SUBCASE("binary Z picks out a + lambda b at the assigned cluster") {
        Matrix z(3, 2, 0.0);
        z(0, 1) = z(1, 0) = z(2, 1) = 1.0;
        Matrix a(3, 2), b(3, 2);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a.data()[i] = 0.1 * static_cast<double>(i);
            b.data()[i] = 0.01 * static_cast<double>(i);
        }
        const double lambda = 3.0;
        const double expected = -(a(0, 1) + lambda * b(0, 1)) -
                                (a(1, 0) + lambda * b(1, 0)) -
                                (a(2, 1) + lambda * b(2, 1));
        CHECK(auxiliary_value(z, a, b, lambda) == doctest::Approx(expected));
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(auxiliary_value(Matrix(2, 2), Matrix(3, 2), Matrix(2, 2), 1.0),
                        ShapeError);
    }
}

TEST_CASE("bound tightness and domination (sampling check)") {
    std::mt19937_64 rng(16);
    const Toy t = make_toy(rng, 15, 3);
    const ModeSet m = index_modes({2, 8});
    const double lambda = 2.0;
    const Matrix zi = oracles::random_simplex_matrix(rng, 15, 2);
    const UpdateBuffers buf = build_update_vectors(t.ds, t.aff, t.ks, zi, m);
    const double r_at_zi = relaxed_objective(t.ds, t.aff, t.ks, zi, m, lambda);
    // the quadratic pairwise term linearizes with coefficient 2*lambda on b
    const double c_i = r_at_zi - auxiliary_value(zi, buf.a, buf.b, 2.0 * lambda);

    // tight at the expansion point, and c_i reproducible
    const UpdateBuffers buf2 = build_update_vectors(t.ds, t.aff, t.ks, zi, m);
    CHECK(r_at_zi - auxiliary_value(zi, buf2.a, buf2.b, 2.0 * lambda) ==
          doctest::Approx(c_i));

    for (int trial = 0; trial < 100; ++trial) {
        const Matrix z = oracles::random_simplex_matrix(rng, 15, 2);
        const double bound = auxiliary_value(z, buf.a, buf.b, 2.0 * lambda) + c_i;
        const double r = relaxed_objective(t.ds, t.aff, t.ks, z, m, lambda);
        CHECK(bound >= r - 1e-9);
    }
}
