#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "flarebench/types.hpp"

namespace flarebench {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

enum class DayNight { Day, Night };

struct AugmentationConfig {
    double night_brightness_threshold = 60.0;
    std::vector<Rgb> flare_colors = {{255, 40, 40}, {60, 60, 255}};
    int flare_radius_min = 12;
    int flare_radius_max = 48;
    double flare_peak_intensity = 1.0;
    bool streak_enabled = true;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Where a flare landed, recorded so the footprint can be audited later.
struct FlarePlacement {
    int cx = 0;
    int cy = 0;
    int radius = 0;
    Rgb color;
    std::uint64_t seed_used = 0;
};

/// Day iff mean brightness is strictly above the threshold. Equality counts
/// as Night: a borderline image gains an augmentation rather than losing data.
DayNight classify_day_night(const Frame& f, const AugmentationConfig& cfg);

/// Adds a radial Gaussian glow (sigma = radius/2), screen-blended in the
/// placement color, plus an optional horizontal streak (same glow stretched
/// 6:1 along x). Pixels further than 3*radius (18*radius along the streak
/// axis) are untouched. Deterministic given (cfg.rng_seed, stream_key).
std::pair<Frame, FlarePlacement> augment_flare(const Frame& f, const AugmentationConfig& cfg,
                                               std::uint64_t stream_key);

/// Convenience overload keyed by the frame's own index.
std::pair<Frame, FlarePlacement> augment_flare(const Frame& f, const AugmentationConfig& cfg);

/// True when (x, y) lies inside the region augment_flare may have modified.
bool flare_footprint_contains(const FlarePlacement& p, bool streak_enabled, int x, int y);

struct DatasetSummary {
    std::int64_t day = 0;
    std::int64_t night = 0;
    std::int64_t augmented = 0;
    std::int64_t skipped = 0;
};

/// Copies daytime PPMs byte-for-byte, flare-augments nighttime PPMs, and
/// writes augmentation_log.json. Per-image streams are keyed by filename
/// hash, so results do not depend on processing order.
DatasetSummary build_augmented_dataset(const std::filesystem::path& input_dir,
                                       const std::filesystem::path& output_dir,
                                       const AugmentationConfig& cfg);

}  // namespace flarebench
