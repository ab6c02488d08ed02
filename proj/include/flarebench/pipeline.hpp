#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "flarebench/detector.hpp"
#include "flarebench/types.hpp"

namespace flarebench {

struct ChromaClampConfig {
    int excess_threshold = 80;  // max-minus-min channel gate
    int luma_floor = 180;       // mean-channel gate
};

/// Pulls strongly colored bright pixels toward their channel mean by
/// min(1, excess/255). Grayscale input is a fixpoint; so is the clamp's own
/// output. An analytic stand-in for a trained flare-removal denoiser.
Frame chroma_clamp_denoise(const Frame& frame, const ChromaClampConfig& cfg = {});

class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual std::string name() const = 0;
    virtual Frame denoise(const Frame& frame) = 0;
};

class IdentityDenoiser final : public Denoiser {
public:
    std::string name() const override { return "identity"; }
    Frame denoise(const Frame& frame) override { return frame; }
};

class ChromaClampDenoiser final : public Denoiser {
public:
    explicit ChromaClampDenoiser(ChromaClampConfig cfg = {}) : cfg_(cfg) {}
    std::string name() const override { return "chroma_clamp"; }
    Frame denoise(const Frame& frame) override { return chroma_clamp_denoise(frame, cfg_); }

private:
    ChromaClampConfig cfg_;
};

struct CombinerConfig {
    double iou_threshold = 0.5;
    bool class_match_required = true;

    void validate() const;
};

/// Greedy highest-IoU-first merge of tuned detections into raw detections.
/// A matched pair emits one detection carrying the max confidence and the
/// higher-confidence member's box; everything unmatched passes through, so
/// every raw detection is represented in the output.
std::vector<Detection> combine(const std::vector<Detection>& raw, const std::vector<Detection>& tuned,
                               const CombinerConfig& cfg = {});

struct CombineTrace {
    std::vector<Detection> detections;
    // (tuned index, raw index) per merged pair, in greedy match order.
    std::vector<std::pair<std::size_t, std::size_t>> matches;
};

CombineTrace combine_traced(const std::vector<Detection>& raw, const std::vector<Detection>& tuned,
                            const CombinerConfig& cfg = {});

struct StageTimings {
    double denoise_ms = 0.0;
    double tuned_detect_ms = 0.0;
    double raw_detect_ms = 0.0;
    double combine_ms = 0.0;
    double total_ms = 0.0;
};

struct PipelineResult {
    std::vector<Detection> detections;
    StageTimings timings;
};

/// The dual-path frame processor: denoiser -> tuned detector in one path,
/// the untouched frame -> raw detector in the other, merged by the combiner.
/// The two detector paths run concurrently when they are distinct objects.
class Pipeline {
public:
    Pipeline(std::unique_ptr<Denoiser> denoiser, std::shared_ptr<DetectorBackend> raw_detector,
             std::shared_ptr<DetectorBackend> tuned_detector, CombinerConfig combiner = {});

    PipelineResult run(const Frame& frame);

    const CombinerConfig& combiner() const { return combiner_; }
    Denoiser& denoiser() { return *denoiser_; }
    DetectorBackend& raw_detector() { return *raw_; }
    DetectorBackend& tuned_detector() { return *tuned_; }

private:
    std::unique_ptr<Denoiser> denoiser_;
    std::shared_ptr<DetectorBackend> raw_;
    std::shared_ptr<DetectorBackend> tuned_;
    CombinerConfig combiner_;
};

}  // namespace flarebench
