#include "flarebench/sim.hpp"

#include <algorithm>
#include <cmath>

#include "flarebench/rng.hpp"

namespace flarebench {

namespace {

// Brightness of the flasher source relative to sensor saturation. Emergency
// lighting overdrives the sensor; values above 1 make the glow core clip.
constexpr double kSourceGain = 4.0;

constexpr double kBurstPulseS = 0.06;
constexpr double kBurstGapS = 0.08;

double ambient_level(double lux) { return 255.0 * std::min(1.0, lux / 1000.0); }

// ON-time of one schedule slot [slot_start, slot_start + on_len) inside [t0, t1).
double overlap(double t0, double t1, double slot_start, double on_len) {
    const double lo = std::max(t0, slot_start);
    const double hi = std::min(t1, slot_start + on_len);
    return std::max(0.0, hi - lo);
}

}  // namespace

void FlasherPattern::validate() const {
    if (mode == FlasherMode::SteadyOff) return;
    if (!(frequency_hz > 0.0)) throw InvalidArgument("pattern.frequency_hz must be > 0");
    if (!(duty_cycle >= 0.0 && duty_cycle <= 1.0)) throw InvalidArgument("pattern.duty_cycle must be in [0, 1]");
    if (!(intensity > 0.0 && intensity <= 1.0)) throw InvalidArgument("pattern.intensity must be in (0, 1]");
    if (mode == FlasherMode::AlternatingTwoColor) {
        if (colors.size() != 2) throw InvalidArgument("pattern.colors: alternating mode requires exactly 2 colors");
    } else if (colors.empty()) {
        throw InvalidArgument("pattern.colors must not be empty");
    }
}

void CameraModel::validate() const {
    if (!(fps > 0.0)) throw InvalidArgument("camera.fps must be > 0");
    if (!(exposure_fraction > 0.0 && exposure_fraction <= 1.0))
        throw InvalidArgument("camera.exposure_fraction must be in (0, 1]");
    if (!(iso_gain >= 1.0)) throw InvalidArgument("camera.iso_gain must be >= 1");
    if (!(noise_sigma >= 0.0)) throw InvalidArgument("camera.noise_sigma must be >= 0");
}

void SceneConfig::validate() const {
    if (width < 1 || height < 1) throw InvalidArgument("scene.resolution must be >= 1x1");
    if (!(ambient_lux >= 0.0)) throw InvalidArgument("scene.ambient_lux must be >= 0");
    if (car_albedo < 0 || car_albedo > 255) throw InvalidArgument("scene.car_albedo must be in [0, 255]");
    if (!car_box.valid()) throw InvalidArgument("scene.car_box must have positive extent");
    if (flasher_radius < 1) throw InvalidArgument("scene.flasher_radius must be >= 1");
    if (!(distance_scale > 0.0)) throw InvalidArgument("scene.distance_scale must be > 0");
}

double waveform_on_seconds(const FlasherPattern& pattern, double t0, double t1) {
    if (pattern.mode == FlasherMode::SteadyOff || t1 <= t0) return 0.0;
    const double period = 1.0 / pattern.frequency_hz;

    double total = 0.0;
    switch (pattern.mode) {
        case FlasherMode::SteadyOff:
            break;
        case FlasherMode::SingleColor: {
            const double on_len = pattern.duty_cycle * period;
            const auto k0 = static_cast<std::int64_t>(std::floor(t0 / period));
            const auto k1 = static_cast<std::int64_t>(std::floor(t1 / period));
            for (std::int64_t k = k0; k <= k1; ++k) total += overlap(t0, t1, k * period, on_len);
            break;
        }
        case FlasherMode::AlternatingTwoColor: {
            // Each half period is one color's slot, duty-cycled within the slot.
            const double slot = period / 2.0;
            const double on_len = pattern.duty_cycle * slot;
            const auto k0 = static_cast<std::int64_t>(std::floor(t0 / slot));
            const auto k1 = static_cast<std::int64_t>(std::floor(t1 / slot));
            for (std::int64_t k = k0; k <= k1; ++k) total += overlap(t0, t1, k * slot, on_len);
            break;
        }
        case FlasherMode::DoubleBurst: {
            const auto k0 = static_cast<std::int64_t>(std::floor(t0 / period));
            const auto k1 = static_cast<std::int64_t>(std::floor(t1 / period));
            for (std::int64_t k = k0; k <= k1; ++k) {
                const double start = k * period;
                const double p1 = std::min(kBurstPulseS, period);
                total += overlap(t0, t1, start, p1);
                const double p2_off = kBurstPulseS + kBurstGapS;
                if (p2_off < period)
                    total += overlap(t0, t1, start + p2_off, std::min(kBurstPulseS, period - p2_off));
            }
            break;
        }
    }
    return total;
}

double waveform_integral(const FlasherPattern& pattern, const CameraModel& cam, std::int64_t frame_index) {
    pattern.validate();
    cam.validate();
    const double t = static_cast<double>(frame_index) / cam.fps;
    const double window = cam.exposure_fraction / cam.fps;
    return waveform_on_seconds(pattern, t, t + window) / window;
}

Rgb active_color(const FlasherPattern& pattern, double t) {
    if (pattern.mode == FlasherMode::SteadyOff) return {0, 0, 0};
    if (pattern.mode == FlasherMode::AlternatingTwoColor) {
        const auto slot = static_cast<std::int64_t>(std::floor(2.0 * t * pattern.frequency_hz));
        return pattern.colors[static_cast<std::size_t>(slot % 2)];
    }
    return pattern.colors.front();
}

namespace {

struct EffectiveScene {
    BoundingBox car_box;
    double flasher_x;
    double flasher_y;
    double flasher_radius;
};

EffectiveScene apply_distance(const SceneConfig& scene) {
    const double s = scene.distance_scale;
    const double cx = (scene.car_box.x_min + scene.car_box.x_max) / 2.0;
    const double cy = (scene.car_box.y_min + scene.car_box.y_max) / 2.0;
    EffectiveScene eff;
    eff.car_box = {cx + s * (scene.car_box.x_min - cx), cy + s * (scene.car_box.y_min - cy),
                   cx + s * (scene.car_box.x_max - cx), cy + s * (scene.car_box.y_max - cy)};
    eff.flasher_x = cx + s * (scene.flasher_x - cx);
    eff.flasher_y = cy + s * (scene.flasher_y - cy);
    eff.flasher_radius = s * scene.flasher_radius;
    return eff;
}

// Flat saturated core out to the flasher radius, Gaussian skirt beyond it.
double glow_profile(double dist, double radius) {
    if (dist <= radius) return 1.0;
    const double sigma = radius / 2.0;
    const double over = dist - radius;
    if (over > 6.0 * sigma) return 0.0;
    return std::exp(-(over * over) / (2.0 * sigma * sigma));
}

}  // namespace

std::pair<VideoSequence, GroundTruth> render_sequence(const SceneConfig& scene, const FlasherPattern& pattern,
                                                      const CameraModel& cam, double duration_s,
                                                      std::uint64_t seed) {
    scene.validate();
    pattern.validate();
    cam.validate();
    if (!(duration_s > 0.0)) throw InvalidArgument("duration_s must be > 0");

    const EffectiveScene eff = apply_distance(scene);
    const BoundingBox frame_box{0, 0, static_cast<double>(scene.width), static_cast<double>(scene.height)};
    if (!(eff.car_box.x_min >= 0 && eff.car_box.y_min >= 0 && eff.car_box.x_max <= frame_box.x_max &&
          eff.car_box.y_max <= frame_box.y_max))
        throw InvalidScene("car_box (after distance scaling) must lie inside the frame");
    if (eff.flasher_x < 0 || eff.flasher_x >= scene.width || eff.flasher_y < 0 || eff.flasher_y >= scene.height)
        throw InvalidScene("flasher_position must lie inside the frame");
    if (eff.flasher_y > eff.car_box.y_max) throw InvalidScene("flasher must sit on or above the car box");

    // Static scene before gain: dim ground plus the car rectangle.
    const double ambient = ambient_level(scene.ambient_lux);
    const double ground = 0.25 * ambient;
    const double car = scene.car_albedo * std::min(1.0, scene.ambient_lux / 1000.0);
    std::vector<double> base(static_cast<std::size_t>(scene.width) * scene.height);
    for (int y = 0; y < scene.height; ++y) {
        for (int x = 0; x < scene.width; ++x) {
            const bool in_car = x >= eff.car_box.x_min && x < eff.car_box.x_max && y >= eff.car_box.y_min &&
                                y < eff.car_box.y_max;
            base[static_cast<std::size_t>(y) * scene.width + x] = in_car ? car : ground;
        }
    }

    const auto frame_count = static_cast<std::int64_t>(std::llround(duration_s * cam.fps));
    VideoSequence seq;
    seq.fps = cam.fps;
    seq.frames.reserve(static_cast<std::size_t>(frame_count));
    GroundTruth truth;
    truth.car_box = eff.car_box;
    truth.frames.reserve(static_cast<std::size_t>(frame_count));

    const double reach = eff.flasher_radius + 3.0 * eff.flasher_radius;  // core + 6 sigma skirt
    for (std::int64_t i = 0; i < frame_count; ++i) {
        const double t = static_cast<double>(i) / cam.fps;
        const double window = cam.exposure_fraction / cam.fps;
        const double fraction = waveform_on_seconds(pattern, t, t + window) / window;
        // Flare energy normalized to the full frame interval, so longer
        // exposure collects more light at fixed fps.
        const double energy = fraction * cam.exposure_fraction;
        const Rgb color = active_color(pattern, t);

        Frame frame(scene.width, scene.height, i, frame_timestamp_ms(i, cam.fps));
        Rng noise(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const double amp = kSourceGain * pattern.intensity * energy;

        std::uint8_t* px = frame.pixels().data();
        for (int y = 0; y < scene.height; ++y) {
            for (int x = 0; x < scene.width; ++x, px += 3) {
                const double b = base[static_cast<std::size_t>(y) * scene.width + x];
                double r_ch = b, g_ch = b, b_ch = b;
                if (amp > 0.0) {
                    const double dx = x - eff.flasher_x;
                    const double dy = y - eff.flasher_y;
                    const double dist = std::sqrt(dx * dx + dy * dy);
                    if (dist <= reach) {
                        const double g = amp * glow_profile(dist, eff.flasher_radius);
                        r_ch += color.r * g;
                        g_ch += color.g * g;
                        b_ch += color.b * g;
                    }
                }
                r_ch *= cam.iso_gain;
                g_ch *= cam.iso_gain;
                b_ch *= cam.iso_gain;
                if (cam.noise_sigma > 0.0) {
                    r_ch += cam.noise_sigma * noise.next_gaussian();
                    g_ch += cam.noise_sigma * noise.next_gaussian();
                    b_ch += cam.noise_sigma * noise.next_gaussian();
                }
                px[0] = static_cast<std::uint8_t>(std::llround(std::clamp(r_ch, 0.0, 255.0)));
                px[1] = static_cast<std::uint8_t>(std::llround(std::clamp(g_ch, 0.0, 255.0)));
                px[2] = static_cast<std::uint8_t>(std::llround(std::clamp(b_ch, 0.0, 255.0)));
            }
        }
        seq.frames.push_back(std::move(frame));
        truth.frames.push_back({i, fraction, color});
    }
    return {std::move(seq), std::move(truth)};
}

}  // namespace flarebench
