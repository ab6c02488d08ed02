#pragma once

#include <cstdint>
#include <vector>

#include "flarebench/augment.hpp"
#include "flarebench/types.hpp"

namespace flarebench {

enum class FlasherMode { SteadyOff, SingleColor, AlternatingTwoColor, DoubleBurst };

/// Square-wave flasher schedule, phase 0 at t=0. In AlternatingTwoColor mode
/// the two colors take turns every half period, each duty-cycled within its
/// slot. DoubleBurst emits two 60 ms pulses separated by 80 ms per period.
struct FlasherPattern {
    double frequency_hz = 1.3;
    double duty_cycle = 0.5;
    FlasherMode mode = FlasherMode::SingleColor;
    std::vector<Rgb> colors = {{60, 60, 255}};
    double intensity = 1.0;

    void validate() const;
};

struct CameraModel {
    double fps = 24.0;
    double exposure_fraction = 0.5;  // shutter-open fraction of the frame interval
    double iso_gain = 1.0;
    double noise_sigma = 0.0;

    void validate() const;
};

struct SceneConfig {
    int width = 320;
    int height = 240;
    double ambient_lux = 20.0;
    int car_albedo = 90;
    BoundingBox car_box{110, 130, 210, 200};
    int flasher_x = 160;
    int flasher_y = 124;
    int flasher_radius = 28;
    double distance_scale = 1.0;

    void validate() const;
};

/// Seconds the flasher is ON within [t0, t1), walked exactly over the
/// piecewise-constant schedule.
double waveform_on_seconds(const FlasherPattern& pattern, double t0, double t1);

/// Fraction of frame_index's exposure window during which the flasher is ON.
double waveform_integral(const FlasherPattern& pattern, const CameraModel& cam, std::int64_t frame_index);

/// Color scheduled at time t (colors[0] except in alternating mode).
Rgb active_color(const FlasherPattern& pattern, double t);

struct GroundTruthFrame {
    std::int64_t index = 0;
    double intensity = 0.0;  // waveform integral over the exposure window
    Rgb color;
};

struct GroundTruth {
    BoundingBox car_box;  // effective box after distance scaling
    std::vector<GroundTruthFrame> frames;
};

/// Renders duration_s worth of frames: ambient base scene + car rectangle +
/// flasher glow scaled by the per-window waveform energy, all times iso_gain,
/// plus seeded Gaussian sensor noise. Pure given the seed.
std::pair<VideoSequence, GroundTruth> render_sequence(const SceneConfig& scene, const FlasherPattern& pattern,
                                                      const CameraModel& cam, double duration_s,
                                                      std::uint64_t seed);

}  // namespace flarebench
