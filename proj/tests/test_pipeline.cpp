#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <vector>

#include "test_support.hpp"
#include "trajtopo/pipeline.hpp"
#include "trajtopo/synthetic.hpp"

using namespace trajtopo;
using testsupport::TempDir;

namespace {

/// Writes a small balanced synthetic dataset and its manifest; returns the
/// manifest path.
std::filesystem::path write_dataset(const TempDir& dir, std::size_t per_class,
                                    std::size_t points, std::uint64_t seed) {
    const auto dataset = make_synthetic_dataset(per_class, points, 0.005, seed);
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::string name = "traj_" + std::to_string(i) + ".csv";
        save_trajectory_csv(dataset[i], dir.file(name));
        entries.push_back({name, dataset[i].label});
    }
    const auto manifest = dir.file("manifest.csv");
    save_manifest(entries, manifest);
    return manifest;
}

}  // namespace

TEST_CASE("featurize_dataset reports the failing sample") {
    std::vector<LabeledTrajectory> dataset;
    dataset.push_back(generate_synthetic(0, 400, 0.0, 1));
    dataset.push_back(testsupport::make_trajectory({{0, 0}, {1, 1}}));  // too short
    EmbeddingParams params;
    params.reduction = 2;
    CHECK_THROWS_WITH(featurize_dataset(dataset, params, InfiniteBarPolicy::kDrop),
                      Catch::Matchers::ContainsSubstring("sample 1"));
}

TEST_CASE("featurize_dataset is order-preserving and thread-independent") {
    std::vector<LabeledTrajectory> dataset;
    for (int c = 0; c < kNumClasses; ++c) {
        dataset.push_back(generate_synthetic(c, 300, 0.01, 50 + c));
    }
    EmbeddingParams params;
    params.reduction = 2;
    const auto serial = featurize_dataset(dataset, params, InfiniteBarPolicy::kDrop, 1);
    const auto threaded = featurize_dataset(dataset, params, InfiniteBarPolicy::kDrop, 4);
    REQUIRE(serial.size() == threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].values == threaded[i].values);
        CHECK(serial[i].label == dataset[i].label);
    }
}

TEST_CASE("train and evaluate work from a feature table") {
    std::vector<LabeledTrajectory> dataset;
    for (int c = 0; c < kNumClasses; ++c) {
        for (int i = 0; i < 4; ++i) {
            dataset.push_back(generate_synthetic(c, 400, 0.01, 100 + 4 * c + i));
        }
    }
    EmbeddingParams params;
    params.reduction = 4;
    const auto features = featurize_dataset(dataset, params, InfiniteBarPolicy::kDrop);

    TempDir dir;
    save_features_csv(features, dir.file("features.csv").string());
    const FeatureTable table = load_features_csv(dir.file("features.csv").string());

    ForestConfig config;
    config.n_trees = 25;
    config.seed = 11;
    const ForestModel model = train_on_features(table, config);
    const ClassificationReport report = evaluate_features(model, table);
    CHECK(report.total == dataset.size());
    CHECK(report.accuracy >= 0.9);  // training-set accuracy of a forest is high

    FeatureTable narrow = table;
    narrow.feature_count -= 1;
    for (auto& row : narrow.rows) {
        row.pop_back();
    }
    CHECK_THROWS_AS(evaluate_features(model, narrow), InputError);
}

TEST_CASE("the full pipeline writes every product and reproduces itself") {
    TempDir dir;
    const auto manifest = write_dataset(dir, 3, 700, 42);

    PipelineConfig config;
    config.embedding.reduction = 10;
    config.seed = 9;
    config.forest.n_trees = 15;

    const auto out1 = dir.file("run1");
    const PipelineResult result = run_pipeline(manifest, out1, config);

    CHECK(result.split.train.size() == 8);
    CHECK(result.split.test.size() == 2);
    CHECK(result.split.validation.size() == 2);
    CHECK(result.test_report.total == 2);
    CHECK(result.validation_report.total == 2);

    for (const char* name :
         {"features.csv", "split.json", "model.json", "report_test.json",
          "report_validation.json", "confusion_test.csv", "confusion_validation.csv",
          "run_manifest.json"}) {
        INFO(name);
        CHECK(std::filesystem::exists(out1 / name));
    }

    const auto run_doc = nlohmann::json::parse(read_file(out1 / "run_manifest.json"));
    CHECK(run_doc["format"] == "trajtopo-run");
    CHECK(run_doc["samples"] == 12);
    CHECK(run_doc["split"]["train"] == 8);
    CHECK(run_doc["embedding"]["reduction"] == 10);

    const auto out2 = dir.file("run2");
    run_pipeline(manifest, out2, config);
    for (const char* name : {"features.csv", "split.json", "model.json"}) {
        INFO(name);
        CHECK(read_file(out1 / name) == read_file(out2 / name));
    }

    // The split on disk matches the result and is a valid partition.
    const DatasetSplit split = split_from_json(read_file(out1 / "split.json"));
    CHECK(split == result.split);
}

TEST_CASE("the pipeline insists on labels") {
    TempDir dir;
    const auto traj = generate_synthetic(0, 500, 0.01, 3);
    save_trajectory_csv(traj, dir.file("a.csv"));
    write_file_atomic(dir.file("manifest.csv"), "path,label\na.csv,\n");
    PipelineConfig config;
    CHECK_THROWS_WITH(run_pipeline(dir.file("manifest.csv"), dir.file("out"), config),
                      Catch::Matchers::ContainsSubstring("label"));
}

TEST_CASE("labels_from_features flags the unlabeled row") {
    std::vector<FeatureVector> features(2);
    features[0].label = 1;
    CHECK_THROWS_WITH(labels_from_features(features, {0, 1}),
                      Catch::Matchers::ContainsSubstring("sample 1"));
}
