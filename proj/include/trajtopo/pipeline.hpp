#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajtopo/features.hpp"
#include "trajtopo/forest.hpp"
#include "trajtopo/parallel.hpp"
#include "trajtopo/report.hpp"
#include "trajtopo/split.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

struct PipelineConfig {
    EmbeddingParams embedding;
    InfiniteBarPolicy inf_policy = InfiniteBarPolicy::kDrop;
    ForestConfig forest;  // forest.seed is derived from seed by run_pipeline
    std::uint64_t seed = 0;
    double validation_fraction = 0.2;
    double test_fraction = 0.2;
    std::size_t threads = 0;
};

/// Featurizes every trajectory, in dataset order. Failures are annotated
/// with the sample index so a bad file in a large manifest is findable.
inline std::vector<FeatureVector> featurize_dataset(const std::vector<LabeledTrajectory>& dataset,
                                                    const EmbeddingParams& params,
                                                    InfiniteBarPolicy policy,
                                                    std::size_t threads = 0) {
    if (dataset.empty()) {
        throw InputError("dataset is empty");
    }
    params.validate();
    std::vector<FeatureVector> features(dataset.size());
    parallel_for(dataset.size(), threads, [&](std::size_t i) {
        try {
            features[i] = featurize_trajectory(dataset[i], params, policy);
        } catch (const InputError& e) {
            throw InputError("sample " + std::to_string(i) + ": " + e.what());
        }
    });
    return features;
}

inline DataMatrix matrix_from_features(const std::vector<FeatureVector>& features,
                                       const std::vector<std::size_t>& indices) {
    DataMatrix matrix;
    matrix.feature_count = kFeatureCount;
    matrix.values.reserve(indices.size() * kFeatureCount);
    for (std::size_t idx : indices) {
        matrix.push_row(features[idx].values);
    }
    return matrix;
}

inline std::vector<int> labels_from_features(const std::vector<FeatureVector>& features,
                                             const std::vector<std::size_t>& indices) {
    std::vector<int> labels;
    labels.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (!features[idx].label) {
            throw InputError("sample " + std::to_string(idx) + " has no label");
        }
        labels.push_back(*features[idx].label);
    }
    return labels;
}

inline DataMatrix matrix_from_table(const FeatureTable& table) {
    DataMatrix matrix;
    matrix.feature_count = table.feature_count;
    matrix.values.reserve(table.size() * table.feature_count);
    for (const auto& row : table.rows) {
        matrix.push_row(row);
    }
    return matrix;
}

inline std::vector<int> labels_from_table(const FeatureTable& table) {
    std::vector<int> labels;
    labels.reserve(table.size());
    for (std::size_t i = 0; i < table.labels.size(); ++i) {
        if (!table.labels[i]) {
            throw InputError("feature row " + std::to_string(i) + " has no label");
        }
        labels.push_back(*table.labels[i]);
    }
    return labels;
}

inline ForestModel train_on_features(const FeatureTable& table, const ForestConfig& config,
                                     std::size_t threads = 0) {
    return train_forest(matrix_from_table(table), labels_from_table(table), config, threads);
}

inline ClassificationReport evaluate_features(const ForestModel& model, const FeatureTable& table,
                                              std::size_t threads = 0) {
    if (table.feature_count != model.feature_count) {
        throw InputError("feature width " + std::to_string(table.feature_count) +
                         " does not match the model (" + std::to_string(model.feature_count) + ")");
    }
    const std::vector<int> truth = labels_from_table(table);
    const std::vector<int> predicted = predict_batch(model, matrix_from_table(table), threads);
    return make_report(truth, predicted);
}

struct PipelineResult {
    DatasetSplit split;
    ClassificationReport test_report;
    ClassificationReport validation_report;
};

namespace detail {

inline nlohmann::ordered_json embedding_json(const EmbeddingParams& params) {
    return {{"dimension", params.dimension},
            {"delay", params.delay},
            {"reduction", params.reduction},
            {"normalize", params.normalize}};
}

inline nlohmann::ordered_json forest_json(const ForestConfig& config) {
    nlohmann::ordered_json doc;
    doc["n_trees"] = config.n_trees;
    doc["max_depth"] = config.max_depth ? nlohmann::ordered_json(*config.max_depth)
                                        : nlohmann::ordered_json(nullptr);
    doc["min_samples_split"] = config.min_samples_split;
    doc["bootstrap"] = config.bootstrap;
    doc["feature_subset"] = config.feature_subset ? nlohmann::ordered_json(*config.feature_subset)
                                                  : nlohmann::ordered_json(nullptr);
    doc["seed"] = config.seed;
    return doc;
}

}  // namespace detail

/// Full run: featurize a labeled manifest, split, train, evaluate on the
/// held-out test and validation subsets, and write every product to out_dir
/// (features.csv, split.json, model.json, the two reports and confusion
/// matrices, and run_manifest.json describing the run).
inline PipelineResult run_pipeline(const std::filesystem::path& manifest_path,
                                   const std::filesystem::path& out_dir,
                                   const PipelineConfig& config) {
    const auto dataset = load_dataset(manifest_path);
    if (dataset.empty()) {
        throw InputError("manifest lists no trajectories: " + manifest_path.string());
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!dataset[i].label) {
            throw InputError("sample " + std::to_string(i) +
                             " has no label; the pipeline needs a fully labeled manifest");
        }
    }

    const auto features =
        featurize_dataset(dataset, config.embedding, config.inf_policy, config.threads);
    const DatasetSplit split = split_dataset(dataset.size(), config.validation_fraction,
                                             config.test_fraction, config.seed);

    ForestConfig forest_config = config.forest;
    forest_config.seed = mix_seed(config.seed, seed_tag::kForest);
    const ForestModel model =
        train_forest(matrix_from_features(features, split.train),
                     labels_from_features(features, split.train), forest_config, config.threads);

    auto report_for = [&](const std::vector<std::size_t>& indices) {
        const auto truth = labels_from_features(features, indices);
        const auto predicted =
            predict_batch(model, matrix_from_features(features, indices), config.threads);
        return make_report(truth, predicted);
    };
    PipelineResult result;
    result.split = split;
    result.test_report = report_for(split.test);
    result.validation_report = report_for(split.validation);

    std::filesystem::create_directories(out_dir);
    save_features_csv(features, (out_dir / "features.csv").string());
    write_file_atomic(out_dir / "split.json", split_to_json(split));
    write_file_atomic(out_dir / "model.json", model_to_json(model));
    write_file_atomic(out_dir / "report_test.json", report_to_json(result.test_report));
    write_file_atomic(out_dir / "report_validation.json", report_to_json(result.validation_report));
    write_file_atomic(out_dir / "confusion_test.csv", confusion_to_csv(result.test_report));
    write_file_atomic(out_dir / "confusion_validation.csv",
                      confusion_to_csv(result.validation_report));

    nlohmann::ordered_json manifest;
    manifest["format"] = "trajtopo-run";
    manifest["version"] = 1;
    manifest["seed"] = config.seed;
    manifest["samples"] = dataset.size();
    manifest["embedding"] = detail::embedding_json(config.embedding);
    manifest["inf_policy"] = to_string(config.inf_policy);
    manifest["forest"] = detail::forest_json(forest_config);
    manifest["split"] = {{"train", split.train.size()},
                         {"test", split.test.size()},
                         {"validation", split.validation.size()}};
    manifest["accuracy"] = {{"test", result.test_report.accuracy},
                            {"validation", result.validation_report.accuracy}};
    manifest["outputs"] = {"features.csv",          "split.json",
                           "model.json",            "report_test.json",
                           "report_validation.json", "confusion_test.csv",
                           "confusion_validation.csv"};
    write_file_atomic(out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace trajtopo
