#pragma once

// Helpers shared by the test binaries: scratch directories, random clouds,
// and tolerant diagram comparison.

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "trajtopo/embedding.hpp"
#include "trajtopo/persistence.hpp"
#include "trajtopo/rng.hpp"
#include "trajtopo/trajectory.hpp"

namespace testsupport {

/// Creates a unique directory under the system temp root and removes it,
/// with everything inside, on destruction.
class TempDir {
public:
    TempDir() {
        std::string pattern =
            (std::filesystem::temp_directory_path() / "trajtopo_test_XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = pattern;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline trajtopo::PointCloud random_cloud(trajtopo::Rng& rng, std::size_t n, std::size_t dim,
                                         double scale = 1.0) {
    trajtopo::PointCloud cloud;
    cloud.ambient_dim = dim;
    std::vector<double> point(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            point[d] = scale * rng.uniform();
        }
        cloud.push_point(point);
    }
    return cloud;
}

inline trajtopo::LabeledTrajectory make_trajectory(std::vector<std::array<double, 2>> samples) {
    trajtopo::LabeledTrajectory trajectory;
    trajectory.samples = std::move(samples);
    return trajectory;
}

inline bool bars_match(const trajtopo::PersistenceDiagram& diagram,
                       const std::vector<std::pair<double, double>>& expected, double tol) {
    if (diagram.bars.size() != expected.size()) {
        return false;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& bar = diagram.bars[i];
        if (std::abs(bar.birth - expected[i].first) > tol) {
            return false;
        }
        const bool expect_inf = std::isinf(expected[i].second);
        if (expect_inf != bar.is_infinite()) {
            return false;
        }
        if (!expect_inf && std::abs(bar.death - expected[i].second) > tol) {
            return false;
        }
    }
    return true;
}

inline bool diagrams_match(const trajtopo::PersistenceDiagram& a,
                           const trajtopo::PersistenceDiagram& b, double tol) {
    if (a.bars.size() != b.bars.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.bars.size(); ++i) {
        if (std::abs(a.bars[i].birth - b.bars[i].birth) > tol) {
            return false;
        }
        if (a.bars[i].is_infinite() != b.bars[i].is_infinite()) {
            return false;
        }
        if (!a.bars[i].is_infinite() && std::abs(a.bars[i].death - b.bars[i].death) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace testsupport
