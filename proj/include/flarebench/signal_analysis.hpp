#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "flarebench/types.hpp"

namespace flarebench {

/// Per-frame target selection: track by IoU against the previously selected
/// box (seeded by roi, else by the highest-confidence target-class detection
/// in the first frame that has one). Best IoU below 0.1 falls back to the
/// highest-confidence detection; frames with no target-class detection record
/// 0.0 and keep the previous box (ZeroFill).
ConfidenceSignal extract_signal(const std::vector<std::vector<Detection>>& detections_per_frame,
                                const std::string& target_class, double fps,
                                std::optional<BoundingBox> roi = std::nullopt);

struct SignalMetrics {
    static constexpr std::array<double, 4> kThresholds{0.5, 0.6, 0.7, 0.8};

    double average = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
    double range = 0.0;
    std::array<double, 4> fraction_above{};  // closed comparison: value >= tau

    bool operator==(const SignalMetrics&) const = default;
};

SignalMetrics compute_metrics(const ConfidenceSignal& s);

struct SpectrumPeak {
    double frequency_hz = 0.0;
    double magnitude = 0.0;
    double resolution_hz = 0.0;  // fps / N

    bool operator==(const SpectrumPeak&) const = default;
};

struct Spectrum {
    std::vector<double> frequencies;  // k * fps / N, k = 0..N/2
    std::vector<double> magnitudes;
    std::optional<SpectrumPeak> dominant;  // nullopt = NoPeak
};

/// Mean-subtracted, Hann-windowed real DFT. The dominant peak is the largest
/// magnitude at or above 0.2 Hz; all-but-numerically-zero spectra report no
/// peak. Requires at least 16 samples.
Spectrum spectrum(const ConfidenceSignal& s);

/// Complex DFT used by spectrum(); mixed-radix Cooley-Tukey with a direct
/// fallback for prime sizes.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& input);

struct DetectionLossCurve {
    std::vector<double> thresholds;         // 0.00 .. 1.00 step 0.01
    std::vector<double> fraction_detected;  // |{i : s_i >= tau}| / N

    bool operator==(const DetectionLossCurve&) const = default;
};

DetectionLossCurve detection_loss(const ConfidenceSignal& s);

/// Per-channel 256-bin histograms over a box region, each normalized to sum 1.
struct TonalHistogram {
    std::array<std::array<double, 256>, 3> channels{};
};

TonalHistogram tonal_histogram(const Frame& frame, const BoundingBox& box);

/// L1 distance between two normalized single-channel histograms, in [0, 2].
double histogram_l1(const std::array<double, 256>& a, const std::array<double, 256>& b);

/// Mean per-channel L1 distance between two tonal histograms, in [0, 2].
double tonal_shift_l1(const TonalHistogram& a, const TonalHistogram& b);

struct TrackEntry {
    std::int64_t frame_index = 0;
    BoundingBox box;
    double confidence = 0.0;
};

struct Track {
    int id = 0;
    std::string class_label;
    std::vector<TrackEntry> entries;
};

/// Greedy frame-to-frame IoU association. Confidences pass through from the
/// associated detections unchanged; a track that misses a frame ends.
std::vector<Track> iou_track(const std::vector<std::vector<Detection>>& detections_per_frame,
                             double match_threshold = 0.3);

}  // namespace flarebench
