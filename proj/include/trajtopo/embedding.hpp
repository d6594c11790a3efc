#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trajtopo/csv.hpp"
#include "trajtopo/error.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

/// A finite set of points in k-dimensional Euclidean space, stored row-major.
struct PointCloud {
    std::size_t ambient_dim = 0;
    std::vector<double> coords;

    std::size_t size() const { return ambient_dim == 0 ? 0 : coords.size() / ambient_dim; }

    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * ambient_dim, ambient_dim};
    }

    void push_point(std::span<const double> values) {
        internal_check(values.size() == ambient_dim, "point dimension mismatch");
        coords.insert(coords.end(), values.begin(), values.end());
    }
};

struct EmbeddingParams {
    int dimension = 3;   // delay-embedding dimension d
    int delay = 10;      // delay tau, in (downsampled) samples
    int reduction = 20;  // keep every reduction-th sample
    bool normalize = false;  // rescale each coordinate to [0,1] first

    void validate() const {
        if (dimension < 1) {
            throw InputError("embedding dimension must be >= 1");
        }
        if (delay < 1) {
            throw InputError("embedding delay must be >= 1");
        }
        if (reduction < 1) {
            throw InputError("reduction factor must be >= 1");
        }
    }
};

/// Keeps samples at indices r, 2r, ..., floor(N/r)*r (1-based), i.e. every
/// r-th sample starting from the r-th. The nominal sample rate is divided
/// by r.
inline LabeledTrajectory downsample(const LabeledTrajectory& trajectory, int reduction) {
    if (reduction < 1) {
        throw InputError("reduction factor must be >= 1");
    }
    const std::size_t n = trajectory.samples.size();
    const std::size_t r = static_cast<std::size_t>(reduction);
    const std::size_t kept = n / r;
    if (kept == 0) {
        throw InputError("empty downsample: trajectory has " + std::to_string(n) +
                         " samples, reduction factor " + std::to_string(reduction));
    }
    LabeledTrajectory result;
    result.label = trajectory.label;
    result.sample_rate_hz = trajectory.sample_rate_hz / static_cast<double>(reduction);
    result.samples.reserve(kept);
    for (std::size_t k = 1; k <= kept; ++k) {
        result.samples.push_back(trajectory.samples[k * r - 1]);
    }
    return result;
}

/// Rescales each coordinate independently to [0,1]; a constant coordinate
/// maps to 0. Off by default throughout the pipeline.
inline LabeledTrajectory normalize_unit_box(const LabeledTrajectory& trajectory) {
    LabeledTrajectory result = trajectory;
    for (int axis = 0; axis < 2; ++axis) {
        double lo = trajectory.samples.front()[axis];
        double hi = lo;
        for (const auto& sample : trajectory.samples) {
            lo = std::min(lo, sample[static_cast<std::size_t>(axis)]);
            hi = std::max(hi, sample[static_cast<std::size_t>(axis)]);
        }
        const double range = hi - lo;
        for (auto& sample : result.samples) {
            sample[static_cast<std::size_t>(axis)] =
                range > 0.0 ? (sample[static_cast<std::size_t>(axis)] - lo) / range : 0.0;
        }
    }
    return result;
}

/// Delay embedding of a scalar series: point i = (s_i, s_{i+tau}, ...,
/// s_{i+(d-1)tau}), yielding N - (d-1)*tau points in R^d.
inline PointCloud delay_embed_coordinate(const std::vector<double>& series, int dimension,
                                         int delay) {
    if (dimension < 1 || delay < 1) {
        throw InputError("delay embedding requires d >= 1 and tau >= 1");
    }
    const std::size_t n = series.size();
    const std::size_t span = static_cast<std::size_t>(dimension - 1) * static_cast<std::size_t>(delay);
    if (n <= span) {
        throw InputError("series too short for delay embedding: N=" + std::to_string(n) +
                         " requires N > (d-1)*tau = " + std::to_string(span));
    }
    const std::size_t count = n - span;
    PointCloud cloud;
    cloud.ambient_dim = static_cast<std::size_t>(dimension);
    cloud.coords.reserve(count * cloud.ambient_dim);
    for (std::size_t i = 0; i < count; ++i) {
        for (int j = 0; j < dimension; ++j) {
            cloud.coords.push_back(series[i + static_cast<std::size_t>(j) * static_cast<std::size_t>(delay)]);
        }
    }
    return cloud;
}

inline std::vector<double> coordinate_series(const LabeledTrajectory& trajectory, int axis) {
    std::vector<double> series;
    series.reserve(trajectory.samples.size());
    for (const auto& sample : trajectory.samples) {
        series.push_back(sample[static_cast<std::size_t>(axis)]);
    }
    return series;
}

/// Combined embedding in R^{2d}: point i is the concatenation of the
/// x-embedding and y-embedding points i. Exposed for completeness; the
/// default pipeline works on the raw cloud and the two coordinate embeddings.
inline PointCloud combined_embed(const LabeledTrajectory& trajectory, int dimension, int delay) {
    const PointCloud x = delay_embed_coordinate(coordinate_series(trajectory, 0), dimension, delay);
    const PointCloud y = delay_embed_coordinate(coordinate_series(trajectory, 1), dimension, delay);
    PointCloud combined;
    combined.ambient_dim = 2 * static_cast<std::size_t>(dimension);
    combined.coords.reserve(x.coords.size() + y.coords.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto px = x.point(i);
        const auto py = y.point(i);
        combined.coords.insert(combined.coords.end(), px.begin(), px.end());
        combined.coords.insert(combined.coords.end(), py.begin(), py.end());
    }
    return combined;
}

struct CloudTriple {
    PointCloud raw;  // downsampled (x, y) pairs in R^2
    PointCloud x;    // delay embedding of the x series in R^d
    PointCloud y;    // delay embedding of the y series in R^d
};

/// Downsamples, then builds the raw 2-D cloud and the two coordinate delay
/// embeddings.
inline CloudTriple build_clouds(const LabeledTrajectory& trajectory, const EmbeddingParams& params) {
    params.validate();
    LabeledTrajectory reduced = downsample(trajectory, params.reduction);
    if (params.normalize) {
        reduced = normalize_unit_box(reduced);
    }
    const std::size_t span =
        static_cast<std::size_t>(params.dimension - 1) * static_cast<std::size_t>(params.delay);
    if (reduced.samples.size() <= span) {
        throw InputError("downsampled trajectory too short for embedding: " +
                         std::to_string(reduced.samples.size()) + " samples, need more than " +
                         std::to_string(span));
    }

    CloudTriple clouds;
    clouds.raw.ambient_dim = 2;
    clouds.raw.coords.reserve(reduced.samples.size() * 2);
    for (const auto& sample : reduced.samples) {
        clouds.raw.coords.push_back(sample[0]);
        clouds.raw.coords.push_back(sample[1]);
    }
    clouds.x = delay_embed_coordinate(coordinate_series(reduced, 0), params.dimension, params.delay);
    clouds.y = delay_embed_coordinate(coordinate_series(reduced, 1), params.dimension, params.delay);
    return clouds;
}

/// Debug dump; schema c0,c1,...,c{k-1}, one point per row.
inline void save_cloud_csv(const PointCloud& cloud, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t j = 0; j < cloud.ambient_dim; ++j) {
        if (j > 0) {
            out += ',';
        }
        out += 'c';
        out += std::to_string(j);
    }
    out += '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto point = cloud.point(i);
        for (std::size_t j = 0; j < point.size(); ++j) {
            if (j > 0) {
                out += ',';
            }
            out += format_g17(point[j]);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace trajtopo
