#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "test_support.hpp"
#include "trajtopo/distance.hpp"
#include "trajtopo/oracle.hpp"
#include "trajtopo/persistence.hpp"

using namespace trajtopo;
using testsupport::bars_match;
using testsupport::diagrams_match;
using testsupport::random_cloud;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kInf = std::numeric_limits<double>::infinity();

PointCloud cloud_from(std::vector<std::vector<double>> points) {
    PointCloud cloud;
    cloud.ambient_dim = points.front().size();
    for (const auto& p : points) {
        cloud.push_point(p);
    }
    return cloud;
}

PointCloud regular_polygon(std::size_t n, double radius = 1.0) {
    PointCloud cloud;
    cloud.ambient_dim = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * 3.14159265358979323846 * static_cast<double>(i) /
                             static_cast<double>(n);
        cloud.push_point(std::vector<double>{radius * std::cos(angle), radius * std::sin(angle)});
    }
    return cloud;
}

/// Independent MST weight list via Prim's algorithm (the engine uses
/// Kruskal + union-find, so agreement is meaningful).
std::vector<double> prim_mst_weights(const DistanceMatrix& dist) {
    const std::size_t n = dist.n;
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<double> weights;
    in_tree[0] = true;
    for (std::size_t j = 1; j < n; ++j) {
        best[j] = dist.at(0, j);
    }
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t pick = 0;
        double pick_value = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j] && best[j] < pick_value) {
                pick = j;
                pick_value = best[j];
            }
        }
        in_tree[pick] = true;
        weights.push_back(pick_value);
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_tree[j]) {
                best[j] = std::min(best[j], dist.at(pick, j));
            }
        }
    }
    std::sort(weights.begin(), weights.end());
    return weights;
}

}  // namespace

TEST_CASE("two points: one merge, one essential component") {
    const auto diagrams = compute_diagrams(cloud_from({{0.0, 0.0}, {3.0, 4.0}}));
    CHECK(bars_match(diagrams.d0, {{0.0, 5.0}, {0.0, kInf}}, 0.0));
    CHECK(diagrams.d1.bars.empty());
}

TEST_CASE("single point has only the essential bar") {
    const auto diagrams = compute_diagrams(cloud_from({{1.0, 2.0}}));
    CHECK(bars_match(diagrams.d0, {{0.0, kInf}}, 0.0));
    CHECK(diagrams.d1.bars.empty());
}

TEST_CASE("unit square: the loop is born at 1 and filled at sqrt(2)") {
    const auto diagrams =
        compute_diagrams(cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK(bars_match(diagrams.d0, {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, kInf}}, 1e-12));
    CHECK(bars_match(diagrams.d1, {{1.0, kSqrt2}}, 1e-12));
}

TEST_CASE("regular 12-gon: loop born at the edge length, dead at sqrt(3)") {
    const auto diagrams = compute_diagrams(regular_polygon(12));
    REQUIRE(diagrams.d1.bars.size() == 1);
    CHECK(diagrams.d1.bars[0].birth == Catch::Approx(0.5176380902050415).margin(1e-12));
    CHECK(diagrams.d1.bars[0].death == Catch::Approx(kSqrt3).margin(1e-12));
}

TEST_CASE("duplicate points produce no zero-length bars") {
    const auto diagrams =
        compute_diagrams(cloud_from({{0, 0}, {0, 0}, {0, 0}, {2, 0}}));
    CHECK(bars_match(diagrams.d0, {{0.0, 2.0}, {0.0, kInf}}, 0.0));
    CHECK(diagrams.d1.bars.empty());
}

TEST_CASE("collinear points carry no loops") {
    const auto diagrams =
        compute_diagrams(cloud_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4.5, 0}}));
    CHECK(diagrams.d1.bars.empty());
    CHECK(diagrams.d0.bars.size() == 5);
}

TEST_CASE("H0 deaths equal the MST weights") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        const PointCloud cloud = random_cloud(rng, n, 2 + rng.below(2));
        const DistanceMatrix dist = pairwise_distances(cloud);
        const PersistenceDiagram d0 = rips_h0(dist);

        std::vector<double> deaths;
        std::size_t infinite = 0;
        for (const auto& bar : d0.bars) {
            CHECK(bar.birth == 0.0);
            if (bar.is_infinite()) {
                ++infinite;
            } else {
                deaths.push_back(bar.death);
            }
        }
        CHECK(infinite == 1);
        CHECK(deaths == prim_mst_weights(dist));  // random reals: no zero weights
    }
}

TEST_CASE("streaming reduction agrees with the naive oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + rng.below(8);
        const std::size_t dim = trial % 2 == 0 ? 2 : 3;
        const PointCloud cloud = random_cloud(rng, n, dim);
        const DistanceMatrix dist = pairwise_distances(cloud);
        const auto fast = compute_diagrams_from_distances(dist);
        const auto slow = oracle_persistence(dist, 1);
        CHECK(diagrams_match(fast.d0, slow[0], 1e-9));
        CHECK(diagrams_match(fast.d1, slow[1], 1e-9));
    }
}

TEST_CASE("oracle agreement holds on shapes with heavy ties") {
    // Vertices of a cube: many equal distances exercise tie handling.
    PointCloud cube;
    cube.ambient_dim = 3;
    for (int mask = 0; mask < 8; ++mask) {
        cube.push_point(std::vector<double>{static_cast<double>(mask & 1),
                                            static_cast<double>((mask >> 1) & 1),
                                            static_cast<double>((mask >> 2) & 1)});
    }
    const DistanceMatrix dist = pairwise_distances(cube);
    const auto fast = compute_diagrams_from_distances(dist);
    const auto slow = oracle_persistence(dist, 1);
    CHECK(diagrams_match(fast.d0, slow[0], 0.0));
    CHECK(diagrams_match(fast.d1, slow[1], 0.0));
}

TEST_CASE("diagrams are invariant under point reordering") {
    Rng rng(99);
    const std::size_t n = 24;
    const PointCloud cloud = random_cloud(rng, n, 2);
    const auto base = compute_diagrams(cloud);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    PointCloud shuffled;
    shuffled.ambient_dim = cloud.ambient_dim;
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = cloud.point(perm[i]);
        shuffled.push_point(std::vector<double>(p.begin(), p.end()));
    }
    const auto permuted = compute_diagrams(shuffled);
    CHECK(diagrams_match(base.d0, permuted.d0, 0.0));
    CHECK(diagrams_match(base.d1, permuted.d1, 0.0));
}

TEST_CASE("scaling the cloud scales every bar") {
    Rng rng(31);
    const PointCloud cloud = random_cloud(rng, 16, 3);
    const double factor = 2.75;
    PointCloud scaled;
    scaled.ambient_dim = cloud.ambient_dim;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        std::vector<double> q(p.begin(), p.end());
        for (double& v : q) {
            v *= factor;
        }
        scaled.push_point(q);
    }
    const auto base = compute_diagrams(cloud);
    const auto big = compute_diagrams(scaled);
    REQUIRE(base.d1.bars.size() == big.d1.bars.size());
    for (std::size_t i = 0; i < base.d1.bars.size(); ++i) {
        CHECK(big.d1.bars[i].birth == Catch::Approx(base.d1.bars[i].birth * factor).epsilon(1e-12));
        CHECK(big.d1.bars[i].death == Catch::Approx(base.d1.bars[i].death * factor).epsilon(1e-12));
    }
}

TEST_CASE("a threshold below the loop's death leaves an essential class") {
    const PointCloud circle = regular_polygon(12);
    const DistanceMatrix dist = pairwise_distances(circle);
    const PersistenceDiagram capped = rips_h1(dist, 1.0);  // death is sqrt(3) > 1
    REQUIRE(capped.bars.size() == 1);
    CHECK(capped.bars[0].is_infinite());
    CHECK(capped.bars[0].birth == Catch::Approx(0.5176380902050415).margin(1e-12));
}

TEST_CASE("small perturbations move bars by a comparable amount") {
    Rng rng(555);
    const PointCloud cloud = random_cloud(rng, 30, 2);
    const double delta = 1e-4;
    PointCloud moved;
    moved.ambient_dim = cloud.ambient_dim;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        std::vector<double> q(p.begin(), p.end());
        for (double& v : q) {
            v += rng.uniform(-delta, delta);
        }
        moved.push_point(q);
    }
    const auto a = compute_diagrams(cloud);
    const auto b = compute_diagrams(moved);

    // Greedy matching: every bar either sits near a counterpart or is short.
    std::vector<bool> used(b.d1.bars.size(), false);
    for (const auto& bar : a.d1.bars) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < b.d1.bars.size(); ++j) {
            if (used[j]) {
                continue;
            }
            const double cost = std::max(std::abs(bar.birth - b.d1.bars[j].birth),
                                         std::abs(bar.death - b.d1.bars[j].death));
            if (cost < best) {
                best = cost;
                best_j = j;
            }
        }
        if (best <= 4.0 * delta) {
            used[best_j] = true;
        } else {
            CHECK(bar.persistence() <= 8.0 * delta);
        }
    }
    for (std::size_t j = 0; j < b.d1.bars.size(); ++j) {
        if (!used[j]) {
            CHECK(b.d1.bars[j].persistence() <= 8.0 * delta);
        }
    }
}

TEST_CASE("diagram JSON round-trips exactly, infinity included") {
    PersistenceDiagram diagram;
    diagram.homology_dim = 1;
    diagram.bars = {{0.1234567890123456, 0.9876543210987654}, {1.0 / 3.0, kInf}};
    const std::string text = diagram_to_json(diagram);
    CHECK(text.find("\"inf\"") != std::string::npos);
    CHECK(text.find("\"dim\": 1") != std::string::npos);
    const PersistenceDiagram back = diagram_from_json(text);
    REQUIRE(back.bars.size() == 2);
    CHECK(back.homology_dim == 1);
    CHECK(back.bars[0].birth == diagram.bars[0].birth);
    CHECK(back.bars[0].death == diagram.bars[0].death);
    CHECK(back.bars[1].is_infinite());

    PersistenceDiagram empty;
    empty.homology_dim = 0;
    const PersistenceDiagram empty_back = diagram_from_json(diagram_to_json(empty));
    CHECK(empty_back.bars.empty());
}

TEST_CASE("diagram JSON rejects malformed input") {
    CHECK_THROWS_AS(diagram_from_json("nope"), InputError);
    CHECK_THROWS_AS(diagram_from_json("{\"dim\": 0}"), InputError);
    CHECK_THROWS_AS(diagram_from_json("{\"dim\": 0, \"bars\": [[1.0]]}"), InputError);
    CHECK_THROWS_AS(diagram_from_json("{\"dim\": 0, \"bars\": [[1.0, \"nan\"]]}"), InputError);
    CHECK_THROWS_AS(diagram_from_json("{\"dim\": 0, \"bars\": [[2.0, 1.0]]}"), InputError);
}

TEST_CASE("degenerate thresholds and sizes are handled") {
    const PointCloud tiny = cloud_from({{0, 0}, {1, 0}});
    const DistanceMatrix dist = pairwise_distances(tiny);
    CHECK(rips_h1(dist, 5.0).bars.empty());  // fewer than 3 points
    const PointCloud square = cloud_from({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(rips_h1(pairwise_distances(square), 0.0), InputError);
}
