#pragma once

#include <cstdint>
#include <vector>

#include "slk/dataset.hpp"

namespace slk {

/// Normalized mutual information I(pred;truth)/sqrt(H(pred) H(truth)) from
/// the empirical contingency table. 1 if both partitions are the identical
/// single cluster, 0 if exactly one has zero entropy.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Clustering accuracy: best fraction of matched points over all
/// cluster-to-class assignments (Hungarian algorithm on the L x L
/// contingency matrix). Labels must lie in [0, L).
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                std::size_t num_clusters);

/// Maximum-sum assignment of an L x L score matrix; returns the column
/// matched to each row. Exposed for testing against brute force.
std::vector<std::size_t> max_assignment(const Matrix& score);

/// K-means++ seeding: first index uniform, the rest sampled proportionally
/// to squared distance from the nearest already-chosen seed. Returns L
/// distinct indices, deterministically per seed.
std::vector<std::uint32_t> kmeanspp_seeds(const Dataset& ds, std::size_t l,
                                          std::uint64_t seed);

}  // namespace slk
