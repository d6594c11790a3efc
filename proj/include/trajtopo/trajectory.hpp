#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "trajtopo/csv.hpp"
#include "trajtopo/error.hpp"

namespace trajtopo {

inline constexpr int kNumClasses = 4;
inline constexpr double kDefaultSampleRateHz = 60.0;

/// A finite sequence of (x, y) samples in temporal order, optionally labeled
/// with a class in {0..3}.
struct LabeledTrajectory {
    std::vector<std::array<double, 2>> samples;
    std::optional<int> label;
    double sample_rate_hz = kDefaultSampleRateHz;

    std::size_t size() const { return samples.size(); }
};

inline void validate_trajectory(const LabeledTrajectory& trajectory, const std::string& context) {
    if (trajectory.samples.empty()) {
        throw InputError(context + ": trajectory has no samples");
    }
    if (!(trajectory.sample_rate_hz > 0.0)) {
        throw InputError(context + ": sample rate must be positive");
    }
    for (const auto& sample : trajectory.samples) {
        if (!std::isfinite(sample[0]) || !std::isfinite(sample[1])) {
            throw InputError(context + ": non-finite coordinate");
        }
    }
    if (trajectory.label && (*trajectory.label < 0 || *trajectory.label >= kNumClasses)) {
        throw InputError(context + ": label outside {0,1,2,3}");
    }
}

/// Reads one trajectory CSV. Schema: header "t,x,y", one sample per row,
/// rows in temporal order. The t column is ignored beyond ordering.
inline LabeledTrajectory load_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open trajectory file: " + path.string());
    }
    std::string line;
    std::size_t line_number = 0;
    auto fail = [&](const std::string& message) -> InputError {
        return InputError(path.string() + ":" + std::to_string(line_number) + ": " + message);
    };

    if (!std::getline(in, line)) {
        ++line_number;
        throw fail("empty file, expected header t,x,y");
    }
    ++line_number;
    {
        const auto header = split_csv_line(line);
        if (header.size() != 3 || trim_ascii(header[0]) != "t" || trim_ascii(header[1]) != "x" ||
            trim_ascii(header[2]) != "y") {
            throw fail("expected header t,x,y");
        }
    }

    LabeledTrajectory trajectory;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw fail("expected 3 fields, got " + std::to_string(fields.size()));
        }
        double x = 0.0;
        double y = 0.0;
        if (!parse_double(fields[1], x)) {
            throw fail("malformed x value '" + fields[1] + "'");
        }
        if (!parse_double(fields[2], y)) {
            throw fail("malformed y value '" + fields[2] + "'");
        }
        if (!std::isfinite(x)) {
            throw fail("non-finite x coordinate");
        }
        if (!std::isfinite(y)) {
            throw fail("non-finite y coordinate");
        }
        trajectory.samples.push_back({x, y});
    }
    if (trajectory.samples.empty()) {
        throw InputError(path.string() + ": trajectory has no samples");
    }
    return trajectory;
}

inline void save_trajectory_csv(const LabeledTrajectory& trajectory, const std::filesystem::path& path) {
    std::string out = "t,x,y\n";
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_g17(trajectory.samples[i][0]);
        out += ',';
        out += format_g17(trajectory.samples[i][1]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

struct ManifestEntry {
    std::filesystem::path path;
    std::optional<int> label;
};

/// Reads a manifest CSV. Schema: header "path,label"; an empty label field
/// marks an unlabeled trajectory. Relative paths are resolved against the
/// manifest's directory.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw InputError("cannot open manifest: " + manifest_path.string());
    }
    const std::filesystem::path base = manifest_path.parent_path();
    std::string line;
    std::size_t line_number = 0;
    auto fail = [&](const std::string& message) -> InputError {
        return InputError(manifest_path.string() + ":" + std::to_string(line_number) + ": " + message);
    };

    if (!std::getline(in, line)) {
        ++line_number;
        throw fail("empty manifest, expected header path,label");
    }
    ++line_number;
    {
        const auto header = split_csv_line(line);
        if (header.size() != 2 || trim_ascii(header[0]) != "path" || trim_ascii(header[1]) != "label") {
            throw fail("expected header path,label");
        }
    }

    std::vector<ManifestEntry> entries;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw fail("expected 2 fields, got " + std::to_string(fields.size()));
        }
        ManifestEntry entry;
        const std::string_view raw_path = trim_ascii(fields[0]);
        if (raw_path.empty()) {
            throw fail("empty path");
        }
        std::filesystem::path file_path{std::string(raw_path)};
        entry.path = file_path.is_absolute() ? file_path : base / file_path;
        const std::string_view raw_label = trim_ascii(fields[1]);
        if (!raw_label.empty()) {
            long value = 0;
            if (!parse_long(raw_label, value) || value < 0 || value >= kNumClasses) {
                throw fail("label outside {0,1,2,3}: '" + std::string(raw_label) + "'");
            }
            entry.label = static_cast<int>(value);
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

/// Loads every trajectory referenced by a manifest, in manifest order, with
/// labels taken from the manifest.
inline std::vector<LabeledTrajectory> load_dataset(const std::filesystem::path& manifest_path) {
    const auto entries = load_manifest(manifest_path);
    std::vector<LabeledTrajectory> trajectories;
    trajectories.reserve(entries.size());
    for (const auto& entry : entries) {
        LabeledTrajectory trajectory = load_trajectory_csv(entry.path);
        trajectory.label = entry.label;
        trajectories.push_back(std::move(trajectory));
    }
    return trajectories;
}

inline void save_manifest(const std::vector<ManifestEntry>& entries,
                          const std::filesystem::path& manifest_path) {
    std::string out = "path,label\n";
    for (const auto& entry : entries) {
        out += entry.path.string();
        out += ',';
        if (entry.label) {
            out += std::to_string(*entry.label);
        }
        out += '\n';
    }
    write_file_atomic(manifest_path, out);
}

}  // namespace trajtopo
