#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "trajtopo/csv.hpp"
#include "trajtopo/embedding.hpp"
#include "trajtopo/error.hpp"
#include "trajtopo/persistence.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

enum class AlphaKind { kBirth = 0, kDeath = 1, kPersistence = 2 };

/// What to do with bars that never die below the threshold. kDrop ignores
/// them; kReplaceWithDiameter caps their death at the cloud diameter first.
enum class InfiniteBarPolicy { kDrop, kReplaceWithDiameter };

inline const char* to_string(InfiniteBarPolicy policy) {
    return policy == InfiniteBarPolicy::kDrop ? "drop" : "diameter";
}

inline InfiniteBarPolicy parse_inf_policy(const std::string& text) {
    if (text == "drop") {
        return InfiniteBarPolicy::kDrop;
    }
    if (text == "diameter") {
        return InfiniteBarPolicy::kReplaceWithDiameter;
    }
    throw InputError("unknown infinite-bar policy \"" + text + "\" (expected drop or diameter)");
}

inline std::vector<double> alpha_values(const PersistenceDiagram& diagram, AlphaKind kind,
                                        InfiniteBarPolicy policy, double diameter) {
    std::vector<double> values;
    values.reserve(diagram.bars.size());
    for (const auto& bar : diagram.bars) {
        double death = bar.death;
        if (bar.is_infinite()) {
            if (policy == InfiniteBarPolicy::kDrop) {
                continue;
            }
            death = diameter;
        }
        switch (kind) {
            case AlphaKind::kBirth:
                values.push_back(bar.birth);
                break;
            case AlphaKind::kDeath:
                values.push_back(death);
                break;
            case AlphaKind::kPersistence:
                values.push_back(death - bar.birth);
                break;
        }
    }
    return values;
}

struct SummaryStats {
    double mean = 0.0;
    double entropy = 0.0;
    double max_value = 0.0;
    double cardinality = 0.0;

    bool operator==(const SummaryStats&) const = default;
};

/// Mean, Shannon entropy (natural log) of the value-mass distribution,
/// maximum, and count. An empty list maps to all zeros; a non-empty list
/// whose sum is zero keeps its count but has entropy defined as zero.
inline SummaryStats compute_stats(const std::vector<double>& values) {
    SummaryStats stats;
    if (values.empty()) {
        return stats;
    }
    stats.cardinality = static_cast<double>(values.size());
    double total = 0.0;
    for (double v : values) {
        internal_check(v >= 0.0 && std::isfinite(v), "summary statistics need finite non-negative values");
        total += v;
        stats.max_value = std::max(stats.max_value, v);
    }
    if (total == 0.0) {
        return stats;
    }
    stats.mean = total / static_cast<double>(values.size());
    double entropy = 0.0;
    for (double v : values) {
        if (v > 0.0) {
            const double p = v / total;
            entropy -= p * std::log(p);
        }
    }
    stats.entropy = entropy;
    return stats;
}

inline constexpr std::size_t kCloudCount = 3;     // raw plane curve, x embedding, y embedding
inline constexpr std::size_t kHomologyDims = 2;   // H0, H1
inline constexpr std::size_t kAlphaKinds = 3;     // birth, death, persistence
inline constexpr std::size_t kStatCount = 4;      // mean, entropy, max, cardinality
inline constexpr std::size_t kFeatureCount = kCloudCount * kHomologyDims * kAlphaKinds * kStatCount;

/// Canonical feature layout: cloud index is the slowest axis, then homology
/// dimension, then alpha kind, then statistic.
inline constexpr std::size_t feature_slot(std::size_t cloud, std::size_t dim, std::size_t alpha,
                                          std::size_t stat) {
    return ((cloud * kHomologyDims + dim) * kAlphaKinds + alpha) * kStatCount + stat;
}

static_assert(kFeatureCount == 72);
static_assert(feature_slot(0, 0, 0, 0) == 0);
static_assert(feature_slot(2, 1, 2, 3) == 71);

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::optional<int> label;
};

namespace detail {

inline void fill_cloud_features(const PointCloud& cloud, std::size_t cloud_index,
                                InfiniteBarPolicy policy, FeatureVector& out) {
    const DistanceMatrix dist = pairwise_distances(cloud);
    const DiagramPair diagrams = compute_diagrams_from_distances(dist);
    const double diameter = dist.diameter();
    const PersistenceDiagram* dims[kHomologyDims] = {&diagrams.d0, &diagrams.d1};
    for (std::size_t dim = 0; dim < kHomologyDims; ++dim) {
        for (std::size_t alpha = 0; alpha < kAlphaKinds; ++alpha) {
            const auto values =
                alpha_values(*dims[dim], static_cast<AlphaKind>(alpha), policy, diameter);
            const SummaryStats stats = compute_stats(values);
            const std::size_t base = feature_slot(cloud_index, dim, alpha, 0);
            out.values[base + 0] = stats.mean;
            out.values[base + 1] = stats.entropy;
            out.values[base + 2] = stats.max_value;
            out.values[base + 3] = stats.cardinality;
        }
    }
}

}  // namespace detail

/// The full descriptor of one trajectory: persistence statistics of the
/// downsampled plane curve and of the delay embeddings of each coordinate.
inline FeatureVector featurize_trajectory(const LabeledTrajectory& traj,
                                          const EmbeddingParams& params,
                                          InfiniteBarPolicy policy = InfiniteBarPolicy::kDrop) {
    const CloudTriple clouds = build_clouds(traj, params);
    FeatureVector out;
    out.label = traj.label;
    detail::fill_cloud_features(clouds.raw, 0, policy, out);
    detail::fill_cloud_features(clouds.x, 1, policy, out);
    detail::fill_cloud_features(clouds.y, 2, policy, out);
    for (double v : out.values) {
        internal_check(std::isfinite(v), "feature vector contains a non-finite value");
    }
    return out;
}

inline void save_features_csv(const std::vector<FeatureVector>& rows, const std::string& path) {
    std::string out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        out += "f" + std::to_string(i) + ",";
    }
    out += "label\n";
    for (const auto& row : rows) {
        for (double v : row.values) {
            out += format_g17(v);
            out += ',';
        }
        if (row.label) {
            out += std::to_string(*row.label);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

/// Feature rows as loaded back from disk. feature_count is taken from the
/// header, so models can be trained on descriptors of any width.
struct FeatureTable {
    std::size_t feature_count = 0;
    std::vector<std::vector<double>> rows;
    std::vector<std::optional<int>> labels;

    std::size_t size() const { return rows.size(); }
};

inline FeatureTable load_features_csv(const std::string& path) {
    const std::string text = read_file(path);
    FeatureTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string& line) {
        if (pos >= text.size()) {
            return false;
        }
        const std::size_t end = text.find('\n', pos);
        line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? text.size() : end + 1;
        ++line_no;
        return true;
    };
    auto fail = [&](const std::string& message) -> InputError {
        return InputError(path + ":" + std::to_string(line_no) + ": " + message);
    };

    std::string line;
    if (!next_line(line)) {
        throw InputError(path + ": empty feature file");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label") {
        throw fail("feature header must be f0,...,f<k-1>,label");
    }
    table.feature_count = header.size() - 1;
    for (std::size_t i = 0; i < table.feature_count; ++i) {
        if (header[i] != "f" + std::to_string(i)) {
            throw fail("unexpected feature column \"" + header[i] + "\" (expected f" +
                       std::to_string(i) + ")");
        }
    }

    while (next_line(line)) {
        if (trim_ascii(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != table.feature_count + 1) {
            throw fail("expected " + std::to_string(table.feature_count + 1) + " cells, found " +
                       std::to_string(cells.size()));
        }
        std::vector<double> row(table.feature_count);
        for (std::size_t i = 0; i < table.feature_count; ++i) {
            double v = 0.0;
            if (!parse_double(cells[i], v) || !std::isfinite(v)) {
                throw fail("cell \"" + cells[i] + "\" is not a finite number");
            }
            row[i] = v;
        }
        std::optional<int> label;
        const std::string label_cell{trim_ascii(cells.back())};
        if (!label_cell.empty()) {
            long value = 0;
            if (!parse_long(label_cell, value) || value < 0 || value >= kNumClasses) {
                throw fail("label \"" + label_cell + "\" is not a class index in [0, " +
                           std::to_string(kNumClasses) + ")");
            }
            label = static_cast<int>(value);
        }
        table.rows.push_back(std::move(row));
        table.labels.push_back(label);
    }
    if (table.rows.empty()) {
        throw InputError(path + ": feature file has no data rows");
    }
    return table;
}

}  // namespace trajtopo
