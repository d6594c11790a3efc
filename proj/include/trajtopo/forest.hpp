#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajtopo/error.hpp"
#include "trajtopo/parallel.hpp"
#include "trajtopo/rng.hpp"
#include "trajtopo/split.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

struct ForestConfig {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_depth;       // unlimited when unset
    std::size_t min_samples_split = 2;
    std::uint64_t seed = 0;
    bool bootstrap = true;
    std::optional<std::size_t> feature_subset;  // floor(sqrt(feature_count)) when unset
};

/// Row-major numeric matrix; rows are samples.
struct DataMatrix {
    std::size_t feature_count = 0;
    std::vector<double> values;

    std::size_t rows() const { return feature_count == 0 ? 0 : values.size() / feature_count; }
    double at(std::size_t row, std::size_t col) const {
        return values[row * feature_count + col];
    }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * feature_count, feature_count};
    }
    void push_row(std::span<const double> row_values) {
        internal_check(row_values.size() == feature_count, "row width mismatch");
        values.insert(values.end(), row_values.begin(), row_values.end());
    }
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t prediction = -1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // preorder, root at 0
};

struct ForestModel {
    std::size_t feature_count = 0;
    std::vector<DecisionTree> trees;
};

inline double gini_impurity(const std::array<std::size_t, kNumClasses>& counts, std::size_t total) {
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace detail {

inline int majority_class(const std::array<std::size_t, kNumClasses>& counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) {
            best = c;  // strict comparison keeps the lowest index on ties
        }
    }
    return best;
}

constexpr double kMinGiniImprovement = 1e-12;

struct TreeTrainer {
    const DataMatrix& X;
    const std::vector<int>& y;
    const ForestConfig& config;
    std::size_t subset_size;
    Rng& rng;
    std::vector<TreeNode> nodes;
    std::vector<std::pair<double, int>> scratch;  // (value, label) sort buffer

    std::int32_t build(std::vector<std::size_t>& indices, std::size_t depth) {
        std::array<std::size_t, kNumClasses> counts{};
        for (std::size_t idx : indices) {
            ++counts[static_cast<std::size_t>(y[idx])];
        }
        const std::size_t n = indices.size();
        const int majority = majority_class(counts);
        const bool pure = counts[static_cast<std::size_t>(majority)] == n;
        const bool depth_ok = !config.max_depth || depth < *config.max_depth;

        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        double best_improvement = kMinGiniImprovement;
        bool found = false;

        if (!pure && depth_ok && n >= config.min_samples_split) {
            const double parent = gini_impurity(counts, n);
            const auto candidates = rng.sample_without_replacement(subset_size, X.feature_count);
            for (std::size_t feature : candidates) {
                scratch.clear();
                for (std::size_t idx : indices) {
                    scratch.push_back({X.at(idx, feature), y[idx]});
                }
                std::sort(scratch.begin(), scratch.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                if (scratch.front().first == scratch.back().first) {
                    continue;  // constant on this subset
                }
                std::array<std::size_t, kNumClasses> left{};
                std::array<std::size_t, kNumClasses> right = counts;
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    ++left[static_cast<std::size_t>(scratch[i].second)];
                    --right[static_cast<std::size_t>(scratch[i].second)];
                    const double a = scratch[i].first;
                    const double b = scratch[i + 1].first;
                    if (a == b) {
                        continue;  // split only between distinct values
                    }
                    const std::size_t nl = i + 1;
                    const std::size_t nr = n - nl;
                    const double weighted =
                        (static_cast<double>(nl) * gini_impurity(left, nl) +
                         static_cast<double>(nr) * gini_impurity(right, nr)) /
                        static_cast<double>(n);
                    const double improvement = parent - weighted;
                    if (improvement > best_improvement) {
                        double threshold = a + (b - a) / 2.0;
                        if (!(threshold < b)) {
                            threshold = a;  // midpoint rounded up; fall back to the left value
                        }
                        best_improvement = improvement;
                        best_feature = feature;
                        best_threshold = threshold;
                        found = true;
                    }
                }
            }
        }

        const std::int32_t node_id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        if (!found) {
            nodes[static_cast<std::size_t>(node_id)].prediction = majority;
            return node_id;
        }

        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (std::size_t idx : indices) {
            (X.at(idx, best_feature) <= best_threshold ? left_idx : right_idx).push_back(idx);
        }
        internal_check(!left_idx.empty() && !right_idx.empty(), "chosen split left a side empty");
        indices.clear();
        indices.shrink_to_fit();

        nodes[static_cast<std::size_t>(node_id)].feature = static_cast<std::int32_t>(best_feature);
        nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        const std::int32_t left_id = build(left_idx, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].left = left_id;
        const std::int32_t right_id = build(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace detail

/// Grow one CART-style tree on the given sample indices: Gini impurity,
/// midpoint thresholds between consecutive distinct values, a fresh random
/// feature subset per node, recursion until pure or no split improves
/// impurity. Ties prefer the earliest candidate in draw order and the
/// lowest class index.
inline DecisionTree train_tree(const DataMatrix& X, const std::vector<int>& y,
                               std::vector<std::size_t> indices, const ForestConfig& config,
                               std::size_t subset_size, Rng& rng) {
    internal_check(!indices.empty(), "train_tree needs at least one sample");
    detail::TreeTrainer trainer{X, y, config, subset_size, rng, {}, {}};
    trainer.build(indices, 0);
    DecisionTree tree;
    tree.nodes = std::move(trainer.nodes);
    return tree;
}

inline std::size_t default_feature_subset(std::size_t feature_count) {
    if (feature_count == 0) {
        return 0;
    }
    const auto subset =
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(feature_count))));
    return std::clamp<std::size_t>(subset, 1, feature_count);
}

/// Bagged forest: tree k draws its own generator from (seed, k), takes a
/// bootstrap sample of the training rows (same size, with replacement), and
/// grows independently, so results do not depend on the thread count.
inline ForestModel train_forest(const DataMatrix& X, const std::vector<int>& y,
                                const ForestConfig& config, std::size_t threads = 0) {
    const std::size_t n = X.rows();
    if (n == 0) {
        throw InputError("training set is empty");
    }
    if (y.size() != n) {
        throw InputError("label count does not match row count");
    }
    for (int label : y) {
        if (label < 0 || label >= kNumClasses) {
            throw InputError("training label out of range: " + std::to_string(label));
        }
    }
    if (config.n_trees == 0) {
        throw InputError("n_trees must be positive");
    }
    if (config.min_samples_split < 2) {
        throw InputError("min_samples_split must be at least 2");
    }
    std::size_t subset_size = config.feature_subset.value_or(default_feature_subset(X.feature_count));
    if (subset_size == 0 || subset_size > X.feature_count) {
        throw InputError("feature_subset must be in [1, feature_count]");
    }

    ForestModel model;
    model.feature_count = X.feature_count;
    model.trees.resize(config.n_trees);
    parallel_for(config.n_trees, threads, [&](std::size_t k) {
        Rng rng(mix_seed(config.seed, seed_tag::kTree, k));
        std::vector<std::size_t> indices(n);
        if (config.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) {
                indices[i] = static_cast<std::size_t>(rng.below(n));
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                indices[i] = i;
            }
        }
        model.trees[k] = train_tree(X, y, std::move(indices), config, subset_size, rng);
    });
    return model;
}

inline int predict_tree(const DecisionTree& tree, std::span<const double> row) {
    std::size_t node = 0;
    while (!tree.nodes[node].is_leaf()) {
        const TreeNode& current = tree.nodes[node];
        node = static_cast<std::size_t>(row[static_cast<std::size_t>(current.feature)] <=
                                                current.threshold
                                            ? current.left
                                            : current.right);
    }
    return tree.nodes[node].prediction;
}

/// Majority vote over trees; ties go to the lowest class index.
inline int predict(const ForestModel& model, std::span<const double> row) {
    if (row.size() != model.feature_count) {
        throw InputError("feature vector width " + std::to_string(row.size()) +
                         " does not match the model (" + std::to_string(model.feature_count) + ")");
    }
    std::array<std::size_t, kNumClasses> votes{};
    for (const auto& tree : model.trees) {
        ++votes[static_cast<std::size_t>(predict_tree(tree, row))];
    }
    return detail::majority_class(votes);
}

inline std::vector<int> predict_batch(const ForestModel& model, const DataMatrix& X,
                                      std::size_t threads = 0) {
    std::vector<int> out(X.rows());
    parallel_for(X.rows(), threads, [&](std::size_t i) { out[i] = predict(model, X.row(i)); });
    return out;
}

inline constexpr const char* kModelFormat = "trajtopo-forest";
inline constexpr int kModelVersion = 1;

inline std::string model_to_json(const ForestModel& model) {
    nlohmann::ordered_json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelVersion;
    doc["feature_count"] = model.feature_count;
    doc["classes"] = kNumClasses;
    doc["trees"] = nlohmann::ordered_json::array();
    for (const auto& tree : model.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& node : tree.nodes) {
            nlohmann::ordered_json entry;
            if (node.is_leaf()) {
                entry["leaf"] = node.prediction;
            } else {
                entry["feature"] = node.feature;
                entry["threshold"] = node.threshold;
                entry["left"] = node.left;
                entry["right"] = node.right;
            }
            nodes.push_back(std::move(entry));
        }
        doc["trees"].push_back({{"nodes", std::move(nodes)}});
    }
    return doc.dump(1) + "\n";
}

inline ForestModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed model JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kModelFormat) {
        throw InputError("not a forest model file (missing format marker)");
    }
    if (doc.value("version", -1) != kModelVersion) {
        throw InputError("unsupported model version");
    }
    if (!doc.contains("feature_count") || !doc["feature_count"].is_number_unsigned() ||
        doc["feature_count"].get<std::size_t>() == 0) {
        throw InputError("model feature_count must be a positive integer");
    }
    if (doc.value("classes", -1) != kNumClasses) {
        throw InputError("model class count must be " + std::to_string(kNumClasses));
    }
    if (!doc.contains("trees") || !doc["trees"].is_array() || doc["trees"].empty()) {
        throw InputError("model must contain a non-empty trees array");
    }

    ForestModel model;
    model.feature_count = doc["feature_count"].get<std::size_t>();
    for (const auto& tree_doc : doc["trees"]) {
        if (!tree_doc.is_object() || !tree_doc.contains("nodes") ||
            !tree_doc["nodes"].is_array() || tree_doc["nodes"].empty()) {
            throw InputError("each tree must contain a non-empty nodes array");
        }
        DecisionTree tree;
        const auto& nodes_doc = tree_doc["nodes"];
        const auto node_count = static_cast<std::int64_t>(nodes_doc.size());
        for (const auto& node_doc : nodes_doc) {
            TreeNode node;
            if (node_doc.contains("leaf")) {
                const auto prediction = node_doc["leaf"].get<std::int64_t>();
                if (prediction < 0 || prediction >= kNumClasses) {
                    throw InputError("leaf prediction out of range");
                }
                node.prediction = static_cast<std::int32_t>(prediction);
            } else {
                if (!node_doc.contains("feature") || !node_doc.contains("threshold") ||
                    !node_doc.contains("left") || !node_doc.contains("right")) {
                    throw InputError("internal node must have feature, threshold, left, right");
                }
                const auto feature = node_doc["feature"].get<std::int64_t>();
                if (feature < 0 || feature >= static_cast<std::int64_t>(model.feature_count)) {
                    throw InputError("node feature index out of range");
                }
                const double threshold = node_doc["threshold"].get<double>();
                if (!std::isfinite(threshold)) {
                    throw InputError("node threshold must be finite");
                }
                const auto left = node_doc["left"].get<std::int64_t>();
                const auto right = node_doc["right"].get<std::int64_t>();
                if (left < 0 || left >= node_count || right < 0 || right >= node_count) {
                    throw InputError("node child index out of range");
                }
                node.feature = static_cast<std::int32_t>(feature);
                node.threshold = threshold;
                node.left = static_cast<std::int32_t>(left);
                node.right = static_cast<std::int32_t>(right);
            }
            tree.nodes.push_back(node);
        }

        // Structural walk: the nodes must form a single tree rooted at 0.
        std::vector<bool> visited(tree.nodes.size(), false);
        std::vector<std::size_t> stack{0};
        std::size_t seen = 0;
        while (!stack.empty()) {
            const std::size_t at = stack.back();
            stack.pop_back();
            if (visited[at]) {
                throw InputError("tree nodes do not form a tree (node visited twice)");
            }
            visited[at] = true;
            ++seen;
            if (!tree.nodes[at].is_leaf()) {
                stack.push_back(static_cast<std::size_t>(tree.nodes[at].left));
                stack.push_back(static_cast<std::size_t>(tree.nodes[at].right));
            }
        }
        if (seen != tree.nodes.size()) {
            throw InputError("tree contains unreachable nodes");
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

}  // namespace trajtopo
