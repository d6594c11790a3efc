#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajtopo/error.hpp"
#include "trajtopo/rng.hpp"

namespace trajtopo {

namespace seed_tag {
inline constexpr std::uint64_t kSplit = 0x53504c4954ULL;   // "SPLIT"
inline constexpr std::uint64_t kForest = 0x464f52455354ULL;  // "FOREST"
inline constexpr std::uint64_t kSynthetic = 0x53594e5448ULL;  // "SYNTH"
inline constexpr std::uint64_t kTree = 0x54524545ULL;  // "TREE"
}  // namespace seed_tag

/// Disjoint index partition of {0..count-1} into train/test/validation.
struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::vector<std::size_t> validation;
    std::uint64_t seed = 0;

    bool operator==(const DatasetSplit&) const = default;
};

/// Seeded three-way split. The validation set is drawn first as
/// round(count * validation_fraction) samples, then the test set as
/// round(remaining * test_fraction); the remainder is train. Rounding is
/// floor(x + 0.5). Assignment is a uniform seeded shuffle; each index list
/// is returned sorted ascending.
inline DatasetSplit split_dataset(std::size_t count, double validation_fraction,
                                  double test_fraction, std::uint64_t seed) {
    if (count < 3) {
        throw InputError("split_dataset requires at least 3 samples, got " + std::to_string(count));
    }
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw InputError("validation fraction must lie in (0,1)");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InputError("test fraction must lie in (0,1)");
    }

    const std::size_t validation_size =
        static_cast<std::size_t>(std::floor(static_cast<double>(count) * validation_fraction + 0.5));
    const std::size_t remaining = count - validation_size;
    const std::size_t test_size =
        static_cast<std::size_t>(std::floor(static_cast<double>(remaining) * test_fraction + 0.5));
    if (validation_size == 0 || test_size == 0 || validation_size + test_size >= count) {
        throw InputError("fractions leave an empty partition (count=" + std::to_string(count) +
                         ", validation=" + std::to_string(validation_size) +
                         ", test=" + std::to_string(test_size) + ")");
    }

    std::vector<std::size_t> indices(count);
    for (std::size_t i = 0; i < count; ++i) {
        indices[i] = i;
    }
    Rng rng(mix_seed(seed, seed_tag::kSplit));
    rng.shuffle(indices);

    DatasetSplit split;
    split.seed = seed;
    split.validation.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(validation_size));
    split.test.assign(indices.begin() + static_cast<std::ptrdiff_t>(validation_size),
                      indices.begin() + static_cast<std::ptrdiff_t>(validation_size + test_size));
    split.train.assign(indices.begin() + static_cast<std::ptrdiff_t>(validation_size + test_size),
                       indices.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

inline std::string split_to_json(const DatasetSplit& split) {
    nlohmann::ordered_json doc;
    doc["seed"] = split.seed;
    doc["train"] = split.train;
    doc["test"] = split.test;
    doc["validation"] = split.validation;
    return doc.dump(2) + "\n";
}

inline DatasetSplit split_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed split JSON: ") + e.what());
    }
    DatasetSplit split;
    try {
        split.seed = doc.at("seed").get<std::uint64_t>();
        split.train = doc.at("train").get<std::vector<std::size_t>>();
        split.test = doc.at("test").get<std::vector<std::size_t>>();
        split.validation = doc.at("validation").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("split JSON missing field: ") + e.what());
    }
    return split;
}

}  // namespace trajtopo
