#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "trajtopo/distance.hpp"
#include "trajtopo/error.hpp"
#include "trajtopo/persistence.hpp"

namespace trajtopo {

inline constexpr std::size_t kMaxOraclePoints = 14;

/// Reference persistence computation kept deliberately naive: materialize
/// every simplex up to dimension max_dim + 1, sort once, reduce the full
/// boundary matrix left to right with no shortcuts. Exponential in n and
/// only meant to check the streaming engine on tiny inputs.
inline std::vector<PersistenceDiagram> oracle_persistence(const DistanceMatrix& dist,
                                                          int max_dim) {
    if (dist.n == 0) {
        throw InputError("oracle_persistence requires at least one point");
    }
    if (dist.n > kMaxOraclePoints) {
        throw InputError("oracle_persistence is limited to " +
                         std::to_string(kMaxOraclePoints) + " points");
    }
    if (max_dim < 0) {
        throw InputError("max_dim must be non-negative");
    }

    struct Simplex {
        double value;
        std::vector<std::uint32_t> vertices;  // ascending
    };

    const std::uint32_t n = static_cast<std::uint32_t>(dist.n);
    std::vector<Simplex> simplices;

    // Enumerate all vertex subsets of size 1 .. max_dim + 2.
    std::vector<std::uint32_t> pick;
    auto emit = [&]() {
        double value = 0.0;
        for (std::size_t i = 1; i < pick.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                value = std::max(value, dist.at(pick[i], pick[j]));
            }
        }
        simplices.push_back({value, pick});
    };
    auto recurse = [&](auto&& self, std::uint32_t first, std::size_t target) -> void {
        if (pick.size() == target) {
            emit();
            return;
        }
        for (std::uint32_t v = first; v < n; ++v) {
            pick.push_back(v);
            self(self, v + 1, target);
            pick.pop_back();
        }
    };
    const std::size_t max_card = std::min<std::size_t>(static_cast<std::size_t>(max_dim) + 2, n);
    for (std::size_t card = 1; card <= max_card; ++card) {
        recurse(recurse, 0, card);
    }

    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        if (a.value != b.value) {
            return a.value < b.value;
        }
        if (a.vertices.size() != b.vertices.size()) {
            return a.vertices.size() < b.vertices.size();
        }
        return a.vertices < b.vertices;
    });

    std::map<std::vector<std::uint32_t>, std::int32_t> index_of;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        index_of[simplices[i].vertices] = static_cast<std::int32_t>(i);
    }

    // Full boundary matrix over Z/2, columns as ascending row-index lists.
    const std::size_t m = simplices.size();
    std::vector<std::vector<std::int32_t>> columns(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& verts = simplices[j].vertices;
        if (verts.size() < 2) {
            continue;
        }
        std::vector<std::uint32_t> face(verts.size() - 1);
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            std::size_t out = 0;
            for (std::size_t k = 0; k < verts.size(); ++k) {
                if (k != drop) {
                    face[out++] = verts[k];
                }
            }
            columns[j].push_back(index_of.at(face));
        }
        std::sort(columns[j].begin(), columns[j].end());
    }

    std::vector<std::int32_t> pivot_owner(m, -1);
    std::vector<bool> destroyed(m, false);
    std::vector<std::int32_t> scratch;
    for (std::size_t j = 0; j < m; ++j) {
        auto& column = columns[j];
        while (!column.empty()) {
            const std::int32_t low = column.back();
            const std::int32_t owner = pivot_owner[static_cast<std::size_t>(low)];
            if (owner < 0) {
                break;
            }
            detail::xor_columns(column, columns[static_cast<std::size_t>(owner)], scratch);
        }
        if (!column.empty()) {
            pivot_owner[static_cast<std::size_t>(column.back())] = static_cast<std::int32_t>(j);
            destroyed[static_cast<std::size_t>(column.back())] = true;
        }
    }

    std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(max_dim) + 1);
    for (int d = 0; d <= max_dim; ++d) {
        diagrams[static_cast<std::size_t>(d)].homology_dim = d;
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!columns[j].empty()) {
            continue;  // destroyer column
        }
        const int dim = static_cast<int>(simplices[j].vertices.size()) - 1;
        if (dim > max_dim) {
            continue;
        }
        auto& bars = diagrams[static_cast<std::size_t>(dim)].bars;
        if (destroyed[j]) {
            // j's class dies when the column owning pivot j enters.
            const std::int32_t owner = pivot_owner[j];
            const double death = simplices[static_cast<std::size_t>(owner)].value;
            if (simplices[j].value < death) {
                bars.push_back({simplices[j].value, death});
            }
        } else {
            bars.push_back({simplices[j].value, kInfiniteDeath});
        }
    }
    for (auto& diagram : diagrams) {
        sort_bars_canonical(diagram);
    }
    return diagrams;
}

}  // namespace trajtopo
