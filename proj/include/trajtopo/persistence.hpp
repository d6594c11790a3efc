#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajtopo/csv.hpp"
#include "trajtopo/distance.hpp"
#include "trajtopo/error.hpp"

namespace trajtopo {

inline constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

struct PersistenceBar {
    double birth = 0.0;
    double death = kInfiniteDeath;

    bool is_infinite() const { return std::isinf(death); }
    double persistence() const { return death - birth; }
    bool operator==(const PersistenceBar&) const = default;
};

/// Multiset of (birth, death) pairs for one homology dimension. Zero-length
/// bars are never emitted. Bars are kept in canonical order: ascending
/// (birth, death), infinite deaths last.
struct PersistenceDiagram {
    int homology_dim = 0;
    std::vector<PersistenceBar> bars;
};

inline void sort_bars_canonical(PersistenceDiagram& diagram) {
    std::sort(diagram.bars.begin(), diagram.bars.end(),
              [](const PersistenceBar& a, const PersistenceBar& b) {
                  if (a.birth != b.birth) {
                      return a.birth < b.birth;
                  }
                  return a.death < b.death;
              });
}

namespace detail {

struct RipsEdge {
    double value;
    std::uint32_t u, v;  // u < v
};

/// All edges with value <= threshold, sorted by (value, u, v). This order is
/// the total order on edges used for reduction; ids are positions in it.
inline std::vector<RipsEdge> sorted_edges(const DistanceMatrix& dist, double threshold) {
    std::vector<RipsEdge> edges;
    edges.reserve(dist.lower.size());
    for (std::uint32_t i = 1; i < dist.n; ++i) {
        for (std::uint32_t j = 0; j < i; ++j) {
            const double value = dist.lower[static_cast<std::size_t>(i) * (i - 1) / 2 + j];
            if (value <= threshold) {
                edges.push_back({value, j, i});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const RipsEdge& a, const RipsEdge& b) {
        if (a.value != b.value) {
            return a.value < b.value;
        }
        if (a.u != b.u) {
            return a.u < b.u;
        }
        return a.v < b.v;
    });
    return edges;
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) {
            parent_[i] = i;
        }
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns false when x and y were already in the same component.
    bool merge(std::size_t x, std::size_t y) {
        std::size_t rx = find(x);
        std::size_t ry = find(y);
        if (rx == ry) {
            return false;
        }
        if (size_[rx] < size_[ry]) {
            std::swap(rx, ry);
        }
        parent_[ry] = rx;
        size_[rx] += size_[ry];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// Symmetric difference of two ascending index lists (Z/2 column addition).
inline void xor_columns(std::vector<std::int32_t>& column, const std::vector<std::int32_t>& other,
                        std::vector<std::int32_t>& scratch) {
    scratch.clear();
    auto a = column.begin();
    auto b = other.begin();
    while (a != column.end() && b != other.end()) {
        if (*a < *b) {
            scratch.push_back(*a++);
        } else if (*b < *a) {
            scratch.push_back(*b++);
        } else {
            ++a;
            ++b;
        }
    }
    scratch.insert(scratch.end(), a, column.end());
    scratch.insert(scratch.end(), b, other.end());
    column.swap(scratch);
}

}  // namespace detail

/// Zero-dimensional Rips persistence. All births are 0; finite deaths are
/// the minimum-spanning-tree edge weights (sorted-edge union-find); exactly
/// one bar is infinite. Zero-length bars (duplicate points) are suppressed.
inline PersistenceDiagram rips_h0(const DistanceMatrix& dist) {
    if (dist.n == 0) {
        throw InputError("rips_h0 requires at least one point");
    }
    PersistenceDiagram diagram;
    diagram.homology_dim = 0;
    const auto edges = detail::sorted_edges(dist, std::numeric_limits<double>::infinity());
    detail::UnionFind components(dist.n);
    std::size_t merges = 0;
    for (const auto& edge : edges) {
        if (merges + 1 == dist.n) {
            break;
        }
        if (components.merge(edge.u, edge.v)) {
            ++merges;
            if (edge.value > 0.0) {
                diagram.bars.push_back({0.0, edge.value});
            }
        }
    }
    internal_check(merges + 1 == dist.n, "union-find left the complete graph disconnected");
    diagram.bars.push_back({0.0, kInfiniteDeath});
    sort_bars_canonical(diagram);
    return diagram;
}

inline constexpr std::size_t kMaxRipsH1Points = 2048;

/// One-dimensional Rips persistence of the filtration restricted to
/// simplices of dimension <= 2 with value <= threshold, Z/2 coefficients.
/// A simplex's value is the maximum pairwise distance among its vertices.
///
/// Edges are classified by a union-find pass (the clearing shortcut: edges
/// that merge components are destroyers of H0 and are never reduced here);
/// triangle boundary columns are then reduced in filtration order against a
/// pivot map over cycle-forming edges. Triangles are enumerated per defining
/// edge (their maximal edge in the total order), so they are never stored or
/// sorted globally. Classes still alive at the threshold are reported as
/// infinite bars; with threshold equal to the cloud diameter none survive.
inline PersistenceDiagram rips_h1(const DistanceMatrix& dist, double threshold) {
    PersistenceDiagram diagram;
    diagram.homology_dim = 1;
    if (dist.n < 3) {
        return diagram;  // no 2-simplices possible
    }
    if (!(threshold > 0.0)) {
        throw InputError("rips_h1 threshold must be positive");
    }
    if (dist.n > kMaxRipsH1Points) {
        throw InputError("point cloud too large for exact Rips H1 (n=" + std::to_string(dist.n) +
                         ", limit " + std::to_string(kMaxRipsH1Points) +
                         "); increase the reduction factor");
    }

    const std::size_t n = dist.n;
    const auto edges = detail::sorted_edges(dist, threshold);
    const std::size_t edge_count = edges.size();

    // rank(u, v): id of edge {u, v} in the sorted order, -1 if absent.
    std::vector<std::int32_t> rank(n * n, -1);
    for (std::size_t e = 0; e < edge_count; ++e) {
        rank[edges[e].u * n + edges[e].v] = static_cast<std::int32_t>(e);
        rank[edges[e].v * n + edges[e].u] = static_cast<std::int32_t>(e);
    }

    // Union-find pass: an edge that merges two components destroys an H0
    // class; the rest create cycles and are the potential H1 births.
    std::vector<bool> positive(edge_count, false);
    {
        detail::UnionFind components(n);
        for (std::size_t e = 0; e < edge_count; ++e) {
            positive[e] = !components.merge(edges[e].u, edges[e].v);
        }
    }

    std::vector<std::int32_t> pivot_owner(edge_count, -1);
    std::vector<std::vector<std::int32_t>> stored_columns;
    std::vector<bool> edge_paired(edge_count, false);
    std::vector<std::int32_t> column;
    std::vector<std::int32_t> scratch;

    for (std::size_t e = 0; e < edge_count; ++e) {
        const std::uint32_t u = edges[e].u;
        const std::uint32_t v = edges[e].v;
        const double triangle_value = edges[e].value;
        for (std::uint32_t w = 0; w < n; ++w) {
            if (w == u || w == v) {
                continue;
            }
            const std::int32_t a = rank[u * n + w];
            const std::int32_t b = rank[v * n + w];
            // Triangle {u, v, w} is processed exactly once: when e is its
            // maximal edge in the total order.
            if (a < 0 || b < 0 || a >= static_cast<std::int32_t>(e) ||
                b >= static_cast<std::int32_t>(e)) {
                continue;
            }
            column.clear();
            column.push_back(std::min(a, b));
            column.push_back(std::max(a, b));
            column.push_back(static_cast<std::int32_t>(e));

            while (!column.empty()) {
                const std::int32_t low = column.back();
                const std::int32_t owner = pivot_owner[static_cast<std::size_t>(low)];
                if (owner < 0) {
                    break;
                }
                detail::xor_columns(column, stored_columns[static_cast<std::size_t>(owner)], scratch);
            }
            if (column.empty()) {
                continue;  // positive triangle; would create H2
            }
            const std::int32_t low = column.back();
            pivot_owner[static_cast<std::size_t>(low)] =
                static_cast<std::int32_t>(stored_columns.size());
            stored_columns.push_back(column);
            edge_paired[static_cast<std::size_t>(low)] = true;
            const double birth = edges[static_cast<std::size_t>(low)].value;
            if (birth < triangle_value) {
                diagram.bars.push_back({birth, triangle_value});
            }
        }
    }

    for (std::size_t e = 0; e < edge_count; ++e) {
        if (positive[e] && !edge_paired[e]) {
            diagram.bars.push_back({edges[e].value, kInfiniteDeath});
        }
    }
    sort_bars_canonical(diagram);
    return diagram;
}

struct DiagramPair {
    PersistenceDiagram d0;
    PersistenceDiagram d1;
};

/// H0 plus H1 with the threshold set to the cloud diameter, so every loop's
/// death is observed and no H1 class survives to infinity.
inline DiagramPair compute_diagrams_from_distances(const DistanceMatrix& dist) {
    DiagramPair result;
    result.d0 = rips_h0(dist);
    result.d1.homology_dim = 1;
    const double diameter = dist.diameter();
    if (dist.n >= 3 && diameter > 0.0) {
        result.d1 = rips_h1(dist, diameter);
    }
    return result;
}

inline DiagramPair compute_diagrams(const PointCloud& cloud) {
    if (cloud.size() == 0) {
        throw InputError("compute_diagrams requires a non-empty cloud");
    }
    return compute_diagrams_from_distances(pairwise_distances(cloud));
}

/// Diagram JSON: {"dim": p, "bars": [[birth, death], ...]} with infinite
/// deaths encoded as the string "inf" and 17 significant digits.
inline std::string diagram_to_json(const PersistenceDiagram& diagram) {
    std::string out = "{\n  \"dim\": " + std::to_string(diagram.homology_dim) + ",\n  \"bars\": [";
    for (std::size_t i = 0; i < diagram.bars.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        const auto& bar = diagram.bars[i];
        out += "    [" + format_g17(bar.birth) + ", ";
        out += bar.is_infinite() ? "\"inf\"" : format_g17(bar.death);
        out += "]";
    }
    out += diagram.bars.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

inline PersistenceDiagram diagram_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed diagram JSON: ") + e.what());
    }
    PersistenceDiagram diagram;
    if (!doc.contains("dim") || !doc.contains("bars") || !doc["bars"].is_array()) {
        throw InputError("diagram JSON must contain \"dim\" and a \"bars\" array");
    }
    diagram.homology_dim = doc["dim"].get<int>();
    for (const auto& entry : doc["bars"]) {
        if (!entry.is_array() || entry.size() != 2) {
            throw InputError("diagram bar must be a [birth, death] pair");
        }
        PersistenceBar bar;
        bar.birth = entry[0].get<double>();
        if (entry[1].is_string()) {
            if (entry[1].get<std::string>() != "inf") {
                throw InputError("diagram death must be a number or \"inf\"");
            }
            bar.death = kInfiniteDeath;
        } else {
            bar.death = entry[1].get<double>();
        }
        if (!(bar.death > bar.birth)) {
            throw InputError("diagram bar must satisfy death > birth");
        }
        diagram.bars.push_back(bar);
    }
    return diagram;
}

}  // namespace trajtopo
