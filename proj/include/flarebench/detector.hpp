#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flarebench/types.hpp"

namespace flarebench {

struct Capabilities {
    std::string name;
    std::vector<std::string> classes;
    std::optional<std::pair<int, int>> expected_resolution;  // nullopt = any
};

class DetectorBackend {
public:
    virtual ~DetectorBackend() = default;
    virtual Capabilities capabilities() const = 0;
    virtual std::vector<Detection> detect(const Frame& frame) = 0;
};

struct ReferenceDetectorConfig {
    double c_clear = 0.95;
    double gamma = 0.85;
    int saturation_level = 240;
    int dilation = 8;  // pixels around the target box over which flare energy is measured

    void validate() const;
};

/// Mean normalized excess of the per-pixel max channel over saturation_level,
/// within `box` dilated by `dilation` and clipped to the frame. 0 when no
/// pixel saturates, 1 when every pixel peaks at 255.
double flare_excess(const Frame& frame, const BoundingBox& box, const ReferenceDetectorConfig& cfg);

/// Deterministic flare-sensitive detector. It consumes ground-truth geometry
/// and models the measured confidence response: one "car" detection at the
/// target box with confidence clamp(c_clear * (1 - gamma * E), 0, 1).
class ReferenceDetector final : public DetectorBackend {
public:
    ReferenceDetector(ReferenceDetectorConfig cfg, BoundingBox car_box);

    Capabilities capabilities() const override;
    std::vector<Detection> detect(const Frame& frame) override;

    const ReferenceDetectorConfig& config() const { return cfg_; }
    const BoundingBox& car_box() const { return car_box_; }

private:
    ReferenceDetectorConfig cfg_;
    BoundingBox car_box_;
};

/// Fixed-script backend for tests: returns a canned list per frame index.
class ScriptedDetector final : public DetectorBackend {
public:
    explicit ScriptedDetector(std::vector<std::vector<Detection>> per_frame, std::string name = "scripted");

    Capabilities capabilities() const override;
    std::vector<Detection> detect(const Frame& frame) override;

private:
    std::vector<std::vector<Detection>> per_frame_;
    std::string name_;
};

}  // namespace flarebench
