// Command-line front end: turn gaze trajectories into persistence-based
// feature vectors and train/evaluate a random-forest classifier on them.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "trajtopo/trajtopo.hpp"

namespace fs = std::filesystem;

namespace {

struct EmbeddingFlags {
    trajtopo::EmbeddingParams params;
    std::string inf_policy = "drop";

    void attach(CLI::App& cmd, bool with_policy) {
        cmd.add_option("--reduction", params.reduction,
                       "keep every reduction-th sample before embedding")
            ->capture_default_str();
        cmd.add_option("--dim", params.dimension, "delay-embedding dimension")
            ->capture_default_str();
        cmd.add_option("--delay", params.delay, "delay in downsampled samples")
            ->capture_default_str();
        cmd.add_flag("--normalize", params.normalize,
                     "rescale each coordinate to [0,1] before embedding");
        if (with_policy) {
            cmd.add_option("--inf-policy", inf_policy,
                           "infinite bars: drop, or diameter to cap them at the cloud diameter")
                ->capture_default_str();
        }
    }

    trajtopo::InfiniteBarPolicy policy() const { return trajtopo::parse_inf_policy(inf_policy); }
};

struct ForestFlags {
    trajtopo::ForestConfig config;
    long long max_depth = -1;

    void attach(CLI::App& cmd) {
        cmd.add_option("--trees", config.n_trees, "number of trees")->capture_default_str();
        cmd.add_option("--max-depth", max_depth, "depth limit per tree (-1 for unlimited)")
            ->capture_default_str();
        cmd.add_option("--min-samples-split", config.min_samples_split,
                       "smallest node a split may divide")
            ->capture_default_str();
    }

    trajtopo::ForestConfig resolve(std::uint64_t seed) {
        if (max_depth >= 0) {
            config.max_depth = static_cast<std::size_t>(max_depth);
        }
        config.seed = seed;
        return config;
    }
};

int run_featurize(const std::string& manifest, const std::string& out, EmbeddingFlags& embed,
                  std::size_t threads) {
    const auto dataset = trajtopo::load_dataset(manifest);
    const auto features =
        trajtopo::featurize_dataset(dataset, embed.params, embed.policy(), threads);
    trajtopo::save_features_csv(features, out);
    std::printf("wrote %zu feature rows to %s\n", features.size(), out.c_str());
    return 0;
}

int run_train(const std::string& features_path, const std::string& out, ForestFlags& forest,
              std::uint64_t seed, std::size_t threads) {
    const auto table = trajtopo::load_features_csv(features_path);
    const auto model = trajtopo::train_on_features(table, forest.resolve(seed), threads);
    trajtopo::write_file_atomic(out, trajtopo::model_to_json(model));
    std::printf("trained %zu trees on %zu samples (%zu features); model written to %s\n",
                model.trees.size(), table.size(), table.feature_count, out.c_str());
    return 0;
}

int run_evaluate(const std::string& features_path, const std::string& model_path,
                 const std::string& out, std::size_t threads) {
    const auto model = trajtopo::model_from_json(trajtopo::read_file(model_path));
    const auto table = trajtopo::load_features_csv(features_path);
    const auto report = trajtopo::evaluate_features(model, table, threads);
    std::fputs(trajtopo::report_to_text(report).c_str(), stdout);
    if (!out.empty()) {
        trajtopo::write_file_atomic(out, trajtopo::report_to_json(report));
        std::printf("\nreport written to %s\n", out.c_str());
    }
    return 0;
}

int run_pipeline_cmd(const std::string& manifest, const std::string& out_dir,
                     EmbeddingFlags& embed, ForestFlags& forest, std::uint64_t seed,
                     double val_frac, double test_frac, std::size_t threads) {
    trajtopo::PipelineConfig config;
    config.embedding = embed.params;
    config.inf_policy = embed.policy();
    config.forest = forest.resolve(0);  // run_pipeline derives the forest seed
    config.seed = seed;
    config.validation_fraction = val_frac;
    config.test_fraction = test_frac;
    config.threads = threads;
    const auto result = trajtopo::run_pipeline(manifest, out_dir, config);
    std::printf("train/test/validation sizes: %zu/%zu/%zu\n", result.split.train.size(),
                result.split.test.size(), result.split.validation.size());
    std::printf("test accuracy:       %.4f\n", result.test_report.accuracy);
    std::printf("validation accuracy: %.4f\n", result.validation_report.accuracy);
    std::printf("outputs in %s\n", out_dir.c_str());
    return 0;
}

int run_synth(const std::string& out_dir, std::size_t per_class, std::size_t points, double noise,
              std::uint64_t seed) {
    const auto dataset = trajtopo::make_synthetic_dataset(per_class, points, noise, seed);
    fs::create_directories(out_dir);
    std::vector<trajtopo::ManifestEntry> entries;
    char name[64];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        std::snprintf(name, sizeof(name), "traj_%04zu_c%d.csv", i, *dataset[i].label);
        trajtopo::save_trajectory_csv(dataset[i], fs::path(out_dir) / name);
        entries.push_back({fs::path(name), dataset[i].label});
    }
    trajtopo::save_manifest(entries, fs::path(out_dir) / "manifest.csv");
    std::printf("wrote %zu trajectories and manifest.csv to %s\n", dataset.size(),
                out_dir.c_str());
    return 0;
}

int run_diagram(const std::string& input, const std::string& out_dir, EmbeddingFlags& embed) {
    const auto trajectory = trajtopo::load_trajectory_csv(input);
    const auto clouds = trajtopo::build_clouds(trajectory, embed.params);
    fs::create_directories(out_dir);
    const struct {
        const char* name;
        const trajtopo::PointCloud* cloud;
    } entries[] = {{"raw", &clouds.raw}, {"x", &clouds.x}, {"y", &clouds.y}};
    for (const auto& entry : entries) {
        if (entry.cloud->size() < 3) {
            std::fprintf(stderr, "note: %s cloud has %zu points; its H1 diagram is empty\n",
                         entry.name, entry.cloud->size());
        }
        const auto diagrams = trajtopo::compute_diagrams(*entry.cloud);
        const std::string base = std::string("diagram_") + entry.name;
        trajtopo::write_file_atomic(fs::path(out_dir) / (base + "_h0.json"),
                                    trajtopo::diagram_to_json(diagrams.d0));
        trajtopo::write_file_atomic(fs::path(out_dir) / (base + "_h1.json"),
                                    trajtopo::diagram_to_json(diagrams.d1));
    }
    std::printf("wrote 6 diagram files to %s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistence features and random-forest classification for gaze trajectories"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::size_t threads = 0;
    app.add_option("--seed", seed, "root random seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 uses the hardware count)")
        ->capture_default_str();

    std::string manifest;
    std::string features_path;
    std::string model_path;
    std::string input_path;
    std::string out_path;
    std::string out_dir;
    double val_frac = 0.2;
    double test_frac = 0.2;
    std::size_t per_class = 40;
    std::size_t points = 2000;
    double noise = 0.005;

    EmbeddingFlags feat_embed;
    auto* featurize = app.add_subcommand("featurize", "turn a manifest of trajectories into a feature CSV");
    featurize->add_option("--manifest", manifest, "manifest CSV (path,label)")->required();
    featurize->add_option("--out", out_path, "output feature CSV")->required();
    feat_embed.attach(*featurize, true);

    ForestFlags train_forest_flags;
    auto* train = app.add_subcommand("train", "train a random forest on a feature CSV");
    train->add_option("--features", features_path, "feature CSV from featurize")->required();
    train->add_option("--out", out_path, "output model JSON")->required();
    train_forest_flags.attach(*train);

    auto* evaluate = app.add_subcommand("evaluate", "score a model against a labeled feature CSV");
    evaluate->add_option("--features", features_path, "feature CSV with labels")->required();
    evaluate->add_option("--model", model_path, "model JSON from train")->required();
    evaluate->add_option("--out", out_path, "also write the report as JSON here");

    EmbeddingFlags pipe_embed;
    ForestFlags pipe_forest;
    auto* pipeline = app.add_subcommand("pipeline", "featurize, split, train, and evaluate in one run");
    pipeline->add_option("--manifest", manifest, "labeled manifest CSV")->required();
    pipeline->add_option("--out-dir", out_dir, "directory for all run products")->required();
    pipeline->add_option("--val-frac", val_frac, "validation fraction")->capture_default_str();
    pipeline->add_option("--test-frac", test_frac, "test fraction")->capture_default_str();
    pipe_embed.attach(*pipeline, true);
    pipe_forest.attach(*pipeline);

    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
    synth->add_option("--out-dir", out_dir, "directory for trajectories and manifest.csv")
        ->required();
    synth->add_option("--per-class", per_class, "trajectories per class")->capture_default_str();
    synth->add_option("--points", points, "samples per trajectory")->capture_default_str();
    synth->add_option("--noise", noise, "sigma of added Gaussian noise")->capture_default_str();

    EmbeddingFlags diag_embed;
    auto* diagram = app.add_subcommand("diagram", "write persistence diagrams for one trajectory");
    diagram->add_option("--input", input_path, "trajectory CSV")->required();
    diagram->add_option("--out-dir", out_dir, "directory for the six diagram files")->required();
    diag_embed.attach(*diagram, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (featurize->parsed()) {
            return run_featurize(manifest, out_path, feat_embed, threads);
        }
        if (train->parsed()) {
            return run_train(features_path, out_path, train_forest_flags, seed, threads);
        }
        if (evaluate->parsed()) {
            return run_evaluate(features_path, model_path, out_path, threads);
        }
        if (pipeline->parsed()) {
            return run_pipeline_cmd(manifest, out_dir, pipe_embed, pipe_forest, seed, val_frac,
                                    test_frac, threads);
        }
        if (synth->parsed()) {
            return run_synth(out_dir, per_class, points, noise, seed);
        }
        if (diagram->parsed()) {
            return run_diagram(input_path, out_dir, diag_embed);
        }
        std::fputs("error: no subcommand selected\n", stderr);
        return 1;
    } catch (const trajtopo::InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
