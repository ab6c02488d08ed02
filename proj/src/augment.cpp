#include "flarebench/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "flarebench/ppm.hpp"
#include "flarebench/rng.hpp"

namespace flarebench {

void AugmentationConfig::validate() const {
    if (!(night_brightness_threshold > 0.0 && night_brightness_threshold < 255.0))
        throw InvalidArgument("night_brightness_threshold must be in (0, 255)");
    if (flare_colors.empty()) throw InvalidArgument("flare_colors must not be empty");
    if (flare_radius_min < 1 || flare_radius_min > flare_radius_max)
        throw InvalidArgument("flare_radius_range requires 1 <= min <= max");
    if (!(flare_peak_intensity > 0.0 && flare_peak_intensity <= 1.0))
        throw InvalidArgument("flare_peak_intensity must be in (0, 1]");
}

DayNight classify_day_night(const Frame& f, const AugmentationConfig& cfg) {
    return mean_brightness(f) > cfg.night_brightness_threshold ? DayNight::Day : DayNight::Night;
}

bool flare_footprint_contains(const FlarePlacement& p, bool streak_enabled, int x, int y) {
    const double dx = x - p.cx;
    const double dy = y - p.cy;
    const double cut = 3.0 * p.radius;
    if (streak_enabled) return (dx / 6.0) * (dx / 6.0) + dy * dy <= cut * cut;
    return dx * dx + dy * dy <= cut * cut;
}

namespace {

inline std::uint8_t screen_blend(std::uint8_t in, double flare) {
    const double out = 255.0 - (255.0 - in) * (255.0 - flare) / 255.0;
    return static_cast<std::uint8_t>(std::llround(std::clamp(out, 0.0, 255.0)));
}

}  // namespace

std::pair<Frame, FlarePlacement> augment_flare(const Frame& f, const AugmentationConfig& cfg,
                                               std::uint64_t stream_key) {
    cfg.validate();
    if (f.width() < 2 * cfg.flare_radius_max || f.height() < 2 * cfg.flare_radius_max)
        throw DegenerateInput("frame smaller than twice the max flare radius");

    // Draw order is part of the determinism contract: color, radius, cx, cy.
    const std::uint64_t seed = derive_seed(cfg.rng_seed, stream_key);
    Rng rng(seed);
    FlarePlacement placement;
    placement.color = cfg.flare_colors[static_cast<std::size_t>(
        rng.next_int(0, static_cast<std::int64_t>(cfg.flare_colors.size()) - 1))];
    placement.radius = static_cast<int>(rng.next_int(cfg.flare_radius_min, cfg.flare_radius_max));
    placement.cx = static_cast<int>(rng.next_int(0, f.width() - 1));
    placement.cy = static_cast<int>(rng.next_int(0, f.height() - 1));
    placement.seed_used = seed;

    Frame out = f;
    const double sigma = placement.radius / 2.0;
    const double cut = 3.0 * placement.radius;
    const double cut2 = cut * cut;
    const int x_reach = cfg.streak_enabled ? static_cast<int>(std::ceil(6.0 * cut)) : static_cast<int>(std::ceil(cut));
    const int y_reach = static_cast<int>(std::ceil(cut));

    const int x0 = std::max(0, placement.cx - x_reach);
    const int x1 = std::min(f.width() - 1, placement.cx + x_reach);
    const int y0 = std::max(0, placement.cy - y_reach);
    const int y1 = std::min(f.height() - 1, placement.cy + y_reach);

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - placement.cx;
            const double dy = y - placement.cy;
            const double d2 = dx * dx + dy * dy;
            double glow = 0.0;
            if (d2 <= cut2) glow = std::exp(-d2 / (2.0 * sigma * sigma));
            if (cfg.streak_enabled) {
                const double s2 = (dx / 6.0) * (dx / 6.0) + dy * dy;
                if (s2 <= cut2) glow = std::max(glow, std::exp(-s2 / (2.0 * sigma * sigma)));
            }
            if (glow <= 0.0) continue;
            const double intensity = cfg.flare_peak_intensity * glow;
            std::uint8_t* px = out.at(x, y);
            px[0] = screen_blend(px[0], placement.color.r * intensity);
            px[1] = screen_blend(px[1], placement.color.g * intensity);
            px[2] = screen_blend(px[2], placement.color.b * intensity);
        }
    }
    return {std::move(out), placement};
}

std::pair<Frame, FlarePlacement> augment_flare(const Frame& f, const AugmentationConfig& cfg) {
    return augment_flare(f, cfg, static_cast<std::uint64_t>(f.index()));
}

namespace {

struct ImageOutcome {
    enum class Kind { Day, Night, Skipped } kind = Kind::Skipped;
    std::optional<FlarePlacement> placement;
    std::string warning;
};

// One image, end to end. The RNG stream is keyed by the filename hash, so
// the result does not depend on which thread picks the image up.
ImageOutcome process_image(const std::filesystem::path& path, const std::filesystem::path& output_dir,
                           const AugmentationConfig& cfg) {
    const std::string name = path.filename().string();
    ImageOutcome outcome;
    Frame frame;
    try {
        frame = read_ppm(path);
    } catch (const IoError& e) {
        outcome.warning = e.what();
        return outcome;
    }

    if (classify_day_night(frame, cfg) == DayNight::Day) {
        outcome.kind = ImageOutcome::Kind::Day;
        std::filesystem::copy_file(path, output_dir / name,
                                   std::filesystem::copy_options::overwrite_existing);
        return outcome;
    }

    outcome.kind = ImageOutcome::Kind::Night;
    try {
        auto [augmented, placement] = augment_flare(frame, cfg, fnv1a64(name));
        write_ppm(output_dir / name, augmented);
        outcome.placement = placement;
    } catch (const DegenerateInput& e) {
        outcome.warning = e.what();
    }
    return outcome;
}

}  // namespace

DatasetSummary build_augmented_dataset(const std::filesystem::path& input_dir,
                                       const std::filesystem::path& output_dir,
                                       const AugmentationConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    if (!fs::is_directory(input_dir)) throw IoError("input is not a directory: " + input_dir.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw EmptyDataset("no .ppm images in " + input_dir.string());

    fs::create_directories(output_dir);

    std::vector<ImageOutcome> outcomes(files.size());
    const unsigned workers =
        std::max(1u, std::min({std::thread::hardware_concurrency(), 8u, static_cast<unsigned>(files.size())}));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1))
            outcomes[i] = process_image(files[i], output_dir, cfg);
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }

    // Log and summary assemble in sorted file order, independent of scheduling.
    DatasetSummary summary;
    nlohmann::json log = nlohmann::json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        const std::string name = files[i].filename().string();
        const ImageOutcome& outcome = outcomes[i];
        if (!outcome.warning.empty()) std::cerr << "warning: skipping " << name << ": " << outcome.warning << "\n";
        switch (outcome.kind) {
            case ImageOutcome::Kind::Day:
                ++summary.day;
                log.push_back({{"file", name}, {"classification", "day"}});
                break;
            case ImageOutcome::Kind::Night:
                ++summary.night;
                if (outcome.placement) {
                    ++summary.augmented;
                    log.push_back({{"file", name},
                                   {"classification", "night"},
                                   {"placement",
                                    {{"cx", outcome.placement->cx},
                                     {"cy", outcome.placement->cy},
                                     {"radius", outcome.placement->radius},
                                     {"color",
                                      {outcome.placement->color.r, outcome.placement->color.g,
                                       outcome.placement->color.b}},
                                     {"seed", outcome.placement->seed_used}}}});
                } else {
                    ++summary.skipped;
                }
                break;
            case ImageOutcome::Kind::Skipped:
                ++summary.skipped;
                break;
        }
    }

    std::ofstream out(output_dir / "augmentation_log.json");
    if (!out) throw IoError("cannot write augmentation_log.json");
    out << log.dump(2) << "\n";
    return summary;
}

}  // namespace flarebench
