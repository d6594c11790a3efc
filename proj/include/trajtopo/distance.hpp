#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "trajtopo/embedding.hpp"
#include "trajtopo/error.hpp"

namespace trajtopo {

/// Symmetric nonnegative distances with zero diagonal, lower-triangular
/// storage: entry (i, j) with i > j lives at i*(i-1)/2 + j.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> lower;

    double at(std::size_t i, std::size_t j) const {
        if (i == j) {
            return 0.0;
        }
        if (i < j) {
            std::swap(i, j);
        }
        return lower[i * (i - 1) / 2 + j];
    }

    double diameter() const {
        double result = 0.0;
        for (const double value : lower) {
            result = std::max(result, value);
        }
        return result;
    }
};

inline constexpr std::size_t kMaxDistanceMatrixPoints = 8192;

/// Euclidean pairwise distances; each pair is computed once, so symmetry is
/// exact by construction.
inline DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n == 0) {
        throw InputError("pairwise_distances requires a non-empty cloud");
    }
    if (n > kMaxDistanceMatrixPoints) {
        throw InputError("point cloud too large for a dense distance matrix (n=" +
                         std::to_string(n) + ", limit " + std::to_string(kMaxDistanceMatrixPoints) +
                         "); increase the reduction factor");
    }
    DistanceMatrix dist;
    dist.n = n;
    dist.lower.reserve(n * (n - 1) / 2);
    for (std::size_t i = 1; i < n; ++i) {
        const auto pi = cloud.point(i);
        for (std::size_t j = 0; j < i; ++j) {
            const auto pj = cloud.point(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < cloud.ambient_dim; ++k) {
                const double diff = pi[k] - pj[k];
                sum += diff * diff;
            }
            dist.lower.push_back(std::sqrt(sum));
        }
    }
    return dist;
}

}  // namespace trajtopo
