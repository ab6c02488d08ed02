#include "flarebench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>

namespace flarebench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

Frame chroma_clamp_denoise(const Frame& frame, const ChromaClampConfig& cfg) {
    Frame out = frame;
    auto& pixels = out.pixels();
    for (std::size_t i = 0; i + 2 < pixels.size(); i += 3) {
        const int r = pixels[i], g = pixels[i + 1], b = pixels[i + 2];
        const int luma3 = r + g + b;  // 3x the mean channel
        if (luma3 < 3 * cfg.luma_floor) continue;
        const int excess = std::max({r, g, b}) - std::min({r, g, b});
        if (excess < cfg.excess_threshold) continue;
        const double t = std::min(1.0, excess / 255.0);
        const double mean = luma3 / 3.0;
        pixels[i] = static_cast<std::uint8_t>(std::llround(r + t * (mean - r)));
        pixels[i + 1] = static_cast<std::uint8_t>(std::llround(g + t * (mean - g)));
        pixels[i + 2] = static_cast<std::uint8_t>(std::llround(b + t * (mean - b)));
    }
    return out;
}

void CombinerConfig::validate() const {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
        throw InvalidArgument("combiner.iou_threshold must be in (0, 1]");
}

CombineTrace combine_traced(const std::vector<Detection>& raw, const std::vector<Detection>& tuned,
                            const CombinerConfig& cfg) {
    cfg.validate();

    struct Candidate {
        double overlap;
        std::size_t tuned_idx;
        std::size_t raw_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t ti = 0; ti < tuned.size(); ++ti) {
        for (std::size_t ri = 0; ri < raw.size(); ++ri) {
            if (cfg.class_match_required && tuned[ti].class_label != raw[ri].class_label) continue;
            const double overlap = iou(tuned[ti].box, raw[ri].box);
            if (overlap >= cfg.iou_threshold) candidates.push_back({overlap, ti, ri});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.tuned_idx != b.tuned_idx) return a.tuned_idx < b.tuned_idx;
        return a.raw_idx < b.raw_idx;
    });

    CombineTrace trace;
    std::vector<bool> tuned_used(tuned.size(), false);
    std::vector<bool> raw_used(raw.size(), false);
    for (const Candidate& c : candidates) {
        if (tuned_used[c.tuned_idx] || raw_used[c.raw_idx]) continue;
        tuned_used[c.tuned_idx] = true;
        raw_used[c.raw_idx] = true;
        const Detection& t = tuned[c.tuned_idx];
        const Detection& r = raw[c.raw_idx];
        Detection merged;
        // Ties keep the raw box: the raw path is the one whose detections
        // the framework promises to preserve.
        merged.box = t.confidence > r.confidence ? t.box : r.box;
        merged.class_label = r.class_label;
        merged.confidence = std::max(t.confidence, r.confidence);
        trace.detections.push_back(std::move(merged));
        trace.matches.emplace_back(c.tuned_idx, c.raw_idx);
    }
    for (std::size_t ri = 0; ri < raw.size(); ++ri)
        if (!raw_used[ri]) trace.detections.push_back(raw[ri]);
    for (std::size_t ti = 0; ti < tuned.size(); ++ti)
        if (!tuned_used[ti]) trace.detections.push_back(tuned[ti]);
    return trace;
}

std::vector<Detection> combine(const std::vector<Detection>& raw, const std::vector<Detection>& tuned,
                               const CombinerConfig& cfg) {
    return combine_traced(raw, tuned, cfg).detections;
}

Pipeline::Pipeline(std::unique_ptr<Denoiser> denoiser, std::shared_ptr<DetectorBackend> raw_detector,
                   std::shared_ptr<DetectorBackend> tuned_detector, CombinerConfig combiner)
    : denoiser_(std::move(denoiser)), raw_(std::move(raw_detector)), tuned_(std::move(tuned_detector)),
      combiner_(combiner) {
    if (!denoiser_ || !raw_ || !tuned_) throw InvalidArgument("pipeline requires a denoiser and two detectors");
    combiner_.validate();
}

PipelineResult Pipeline::run(const Frame& frame) {
    PipelineResult result;
    const auto t_start = Clock::now();

    auto tuned_path = [&]() -> std::pair<std::vector<Detection>, std::pair<double, double>> {
        const auto t_denoise = Clock::now();
        const Frame denoised = denoiser_->denoise(frame);
        const double denoise_ms = ms_since(t_denoise);
        const auto t_detect = Clock::now();
        auto dets = tuned_->detect(denoised);
        return {std::move(dets), {denoise_ms, ms_since(t_detect)}};
    };

    std::vector<Detection> raw_dets;
    std::vector<Detection> tuned_dets;
    if (raw_.get() == tuned_.get()) {
        // Same backend instance in both slots: run sequentially, backends
        // are single-owner.
        auto [dets, times] = tuned_path();
        tuned_dets = std::move(dets);
        result.timings.denoise_ms = times.first;
        result.timings.tuned_detect_ms = times.second;
        const auto t_raw = Clock::now();
        raw_dets = raw_->detect(frame);
        result.timings.raw_detect_ms = ms_since(t_raw);
    } else {
        auto tuned_future = std::async(std::launch::async, tuned_path);
        const auto t_raw = Clock::now();
        raw_dets = raw_->detect(frame);
        result.timings.raw_detect_ms = ms_since(t_raw);
        auto [dets, times] = tuned_future.get();
        tuned_dets = std::move(dets);
        result.timings.denoise_ms = times.first;
        result.timings.tuned_detect_ms = times.second;
    }

    const auto t_combine = Clock::now();
    result.detections = combine(raw_dets, tuned_dets, combiner_);
    result.timings.combine_ms = ms_since(t_combine);
    result.timings.total_ms = ms_since(t_start);
    return result;
}

}  // namespace flarebench
