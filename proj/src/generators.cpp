#include "slk/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace slk {

Dataset gen_blobs(std::size_t n, std::size_t clusters, std::size_t dim,
                  double separation, std::uint64_t seed) {
    if (n < clusters || clusters < 1 || dim < 2)
        throw UsageError("blobs generator needs n >= clusters >= 1 and dim >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix centers(clusters, dim, 0.0);
    for (std::size_t c = 0; c < clusters; ++c) {
        const double angle = 2.0 * std::numbers::pi * c / clusters;
        centers(c, 0) = separation * std::cos(angle);
        centers(c, 1) = separation * std::sin(angle);
    }

    Dataset ds;
    ds.points = Matrix(n, dim);
    ds.labels = std::vector<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % clusters;
        (*ds.labels)[i] = static_cast<int>(c);
        double* row = ds.points.row(i);
        for (std::size_t j = 0; j < dim; ++j) row[j] = centers(c, j) + gauss(rng);
    }
    return ds;
}

Dataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 2) throw UsageError("two-moons generator needs n >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, std::numbers::pi);

    Dataset ds;
    ds.points = Matrix(n, 2);
    ds.labels = std::vector<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = static_cast<int>(i % 2);
        const double t = uni(rng);
        double x, y;
        if (c == 0) {
            x = std::cos(t);
            y = std::sin(t);
        } else {
            x = 1.0 - std::cos(t);
            y = 0.5 - std::sin(t);
        }
        ds.points(i, 0) = x + noise * gauss(rng);
        ds.points(i, 1) = y + noise * gauss(rng);
        (*ds.labels)[i] = c;
    }
    return ds;
}

}  // namespace slk
