#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "trajtopo/error.hpp"
#include "trajtopo/rng.hpp"
#include "trajtopo/split.hpp"
#include "trajtopo/trajectory.hpp"

namespace trajtopo {

/// Synthetic trajectory generator for testing without a recorded dataset.
/// Each class uses a distinct geometric regime so the classes are
/// topologically distinguishable downstream:
///   0 - large noisy loop (one revolution around a circle)
///   1 - small dense cluster (tight jitter around a fixed center)
///   2 - line sweep (monotone drift with slight transverse jitter)
///   3 - multi-cluster jumps (dwell on near-collinear centers, then hop)
/// Deterministic per (class_id, point_count, noise_sigma, seed).
inline LabeledTrajectory generate_synthetic(int class_id, std::size_t point_count,
                                            double noise_sigma, std::uint64_t seed) {
    if (class_id < 0 || class_id >= kNumClasses) {
        throw InputError("synthetic class must lie in {0,1,2,3}, got " + std::to_string(class_id));
    }
    if (point_count < 10) {
        throw InputError("synthetic trajectories need at least 10 points, got " +
                         std::to_string(point_count));
    }
    if (noise_sigma < 0.0) {
        throw InputError("noise sigma must be nonnegative");
    }

    Rng rng(mix_seed(seed, seed_tag::kSynthetic, static_cast<std::uint64_t>(class_id)));
    LabeledTrajectory trajectory;
    trajectory.label = class_id;
    trajectory.samples.resize(point_count);
    const double n_minus_1 = static_cast<double>(point_count - 1);

    switch (class_id) {
        case 0: {
            // One full revolution; the loop survives downsampling.
            const double radius = 0.35;
            const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            for (std::size_t i = 0; i < point_count; ++i) {
                const double angle =
                    phase + 2.0 * 3.14159265358979323846 * static_cast<double>(i) / n_minus_1;
                trajectory.samples[i] = {0.5 + radius * std::cos(angle),
                                         0.5 + radius * std::sin(angle)};
            }
            break;
        }
        case 1: {
            const double spread = 0.03;
            for (std::size_t i = 0; i < point_count; ++i) {
                trajectory.samples[i] = {0.5 + rng.normal(0.0, spread),
                                         0.5 + rng.normal(0.0, spread)};
            }
            break;
        }
        case 2: {
            const double jitter = 0.01;
            for (std::size_t i = 0; i < point_count; ++i) {
                const double s = static_cast<double>(i) / n_minus_1;
                trajectory.samples[i] = {0.1 + 0.8 * s + rng.normal(0.0, jitter),
                                         0.15 + 0.7 * s + rng.normal(0.0, jitter)};
            }
            break;
        }
        case 3: {
            // Near-collinear centers keep incidental loops weak.
            static constexpr double centers[4][2] = {
                {0.15, 0.20}, {0.40, 0.38}, {0.65, 0.52}, {0.90, 0.70}};
            const double jitter = 0.02;
            const std::size_t dwell = std::max<std::size_t>(point_count / 12, 2);
            std::size_t current = rng.below(4);
            std::size_t remaining = dwell;
            for (std::size_t i = 0; i < point_count; ++i) {
                if (remaining == 0) {
                    std::size_t next = rng.below(3);
                    if (next >= current) {
                        ++next;  // hop to a different center
                    }
                    current = next;
                    remaining = dwell;
                }
                --remaining;
                trajectory.samples[i] = {centers[current][0] + rng.normal(0.0, jitter),
                                         centers[current][1] + rng.normal(0.0, jitter)};
            }
            break;
        }
        default:
            internal_check(false, "unreachable synthetic class");
    }

    if (noise_sigma > 0.0) {
        for (auto& sample : trajectory.samples) {
            sample[0] += rng.normal(0.0, noise_sigma);
            sample[1] += rng.normal(0.0, noise_sigma);
        }
    }
    return trajectory;
}

/// A balanced synthetic dataset: per_class trajectories for each of the four
/// classes, class-major order, each sample drawn with a seed derived from
/// (seed, class, index).
inline std::vector<LabeledTrajectory> make_synthetic_dataset(std::size_t per_class,
                                                             std::size_t point_count,
                                                             double noise_sigma,
                                                             std::uint64_t seed) {
    std::vector<LabeledTrajectory> dataset;
    dataset.reserve(per_class * kNumClasses);
    for (int class_id = 0; class_id < kNumClasses; ++class_id) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::uint64_t sample_seed = mix_seed(seed, seed_tag::kSynthetic,
                                                       static_cast<std::uint64_t>(i) * kNumClasses +
                                                           static_cast<std::uint64_t>(class_id));
            dataset.push_back(generate_synthetic(class_id, point_count, noise_sigma, sample_seed));
        }
    }
    return dataset;
}

}  // namespace trajtopo
