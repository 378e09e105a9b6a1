#pragma once

#include <cstdint>

#include "slk/dataset.hpp"

namespace slk {

/// Isotropic Gaussian blobs on a circle of radius `separation`, roughly
/// equal class sizes, unit within-cluster standard deviation.
Dataset gen_blobs(std::size_t n, std::size_t clusters, std::size_t dim,
                  double separation, std::uint64_t seed);

/// Standard two interleaving half-circles with additive Gaussian noise.
Dataset gen_two_moons(std::size_t n, double noise, std::uint64_t seed);

}  // namespace slk
