#include "flarebench/signal_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flarebench {

ConfidenceSignal extract_signal(const std::vector<std::vector<Detection>>& detections_per_frame,
                                const std::string& target_class, double fps,
                                std::optional<BoundingBox> roi) {
    if (detections_per_frame.empty()) throw NoTarget("no frames given");
    if (!(fps > 0.0)) throw InvalidArgument("fps must be > 0");

    ConfidenceSignal signal;
    signal.fps = fps;
    signal.target_class = target_class;
    signal.values.reserve(detections_per_frame.size());

    std::optional<BoundingBox> prev = roi;
    bool any_target = false;

    for (const auto& frame_dets : detections_per_frame) {
        const Detection* chosen = nullptr;
        const Detection* best_conf = nullptr;
        const Detection* best_iou = nullptr;
        double best_iou_val = -1.0;

        for (const Detection& det : frame_dets) {
            if (det.class_label != target_class) continue;
            if (!best_conf || det.confidence > best_conf->confidence) best_conf = &det;
            if (prev) {
                const double overlap = iou(det.box, *prev);
                if (overlap > best_iou_val) {
                    best_iou_val = overlap;
                    best_iou = &det;
                }
            }
        }

        if (prev && best_iou && best_iou_val >= 0.1)
            chosen = best_iou;
        else if (best_conf)
            chosen = best_conf;

        if (chosen) {
            any_target = true;
            signal.values.push_back(chosen->confidence);
            prev = chosen->box;
        } else {
            signal.values.push_back(0.0);  // ZeroFill; previous box retained
        }
    }

    if (!any_target) throw NoTarget("no '" + target_class + "' detection in any frame");
    return signal;
}

SignalMetrics compute_metrics(const ConfidenceSignal& s) {
    if (s.values.empty()) throw EmptySignal("cannot compute metrics of an empty signal");

    SignalMetrics m;
    double sum = 0.0;
    m.minimum = s.values.front();
    m.maximum = s.values.front();
    std::array<std::size_t, 4> counts{};
    for (double v : s.values) {
        sum += v;
        m.minimum = std::min(m.minimum, v);
        m.maximum = std::max(m.maximum, v);
        for (std::size_t i = 0; i < counts.size(); ++i)
            if (v >= SignalMetrics::kThresholds[i]) ++counts[i];
    }
    m.average = sum / static_cast<double>(s.values.size());
    m.range = m.maximum - m.minimum;
    for (std::size_t i = 0; i < counts.size(); ++i)
        m.fraction_above[i] = static_cast<double>(counts[i]) / static_cast<double>(s.values.size());
    return m;
}

namespace {

std::size_t smallest_prime_factor(std::size_t n) {
    for (std::size_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

void dft_direct(const std::complex<double>* in, std::complex<double>* out, std::size_t n, std::size_t stride) {
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            acc += in[j * stride] * std::polar(1.0, angle);
        }
        out[k] = acc;
    }
}

// Recursive mixed-radix Cooley-Tukey over the smallest prime factor.
void dft_recurse(const std::complex<double>* in, std::complex<double>* out, std::size_t n, std::size_t stride) {
    const std::size_t p = smallest_prime_factor(n);
    if (p == n || n <= 8) {
        dft_direct(in, out, n, stride);
        return;
    }
    const std::size_t m = n / p;
    std::vector<std::complex<double>> sub(n);
    for (std::size_t r = 0; r < p; ++r) dft_recurse(in + r * stride, sub.data() + r * m, m, stride * p);

    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        const std::size_t km = k % m;
        for (std::size_t r = 0; r < p; ++r) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * r) % n) / static_cast<double>(n);
            acc += sub[r * m + km] * std::polar(1.0, angle);
        }
        out[k] = acc;
    }
}

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& input) {
    std::vector<std::complex<double>> out(input.size());
    if (input.empty()) return out;
    dft_recurse(input.data(), out.data(), input.size(), 1);
    return out;
}

Spectrum spectrum(const ConfidenceSignal& s) {
    const std::size_t n = s.values.size();
    if (n < 16) throw InsufficientSamples("spectrum requires at least 16 samples");
    if (!(s.fps > 0.0)) throw InvalidArgument("fps must be > 0");

    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(n);

    std::vector<std::complex<double>> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
        windowed[i] = {(s.values[i] - mean) * hann, 0.0};
    }
    const auto bins = dft(windowed);

    Spectrum spec;
    const std::size_t half = n / 2;
    spec.frequencies.reserve(half + 1);
    spec.magnitudes.reserve(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        spec.frequencies.push_back(static_cast<double>(k) * s.fps / static_cast<double>(n));
        spec.magnitudes.push_back(std::abs(bins[k]));
    }

    // Dominant peak above the 0.2 Hz drift floor; spectra that are zero up to
    // rounding noise report no peak.
    constexpr double kMinFrequencyHz = 0.2;
    constexpr double kNumericalZero = 1e-6;
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k <= half; ++k) {
        if (spec.frequencies[k] < kMinFrequencyHz) continue;
        if (spec.magnitudes[k] > best_mag) {
            best_mag = spec.magnitudes[k];
            best = k;
        }
    }
    if (best_mag > kNumericalZero)
        spec.dominant = SpectrumPeak{spec.frequencies[best], best_mag, s.fps / static_cast<double>(n)};
    return spec;
}

DetectionLossCurve detection_loss(const ConfidenceSignal& s) {
    if (s.values.empty()) throw EmptySignal("cannot compute detection loss of an empty signal");

    DetectionLossCurve curve;
    curve.thresholds.reserve(101);
    curve.fraction_detected.reserve(101);
    for (int i = 0; i <= 100; ++i) {
        const double tau = static_cast<double>(i) / 100.0;
        std::size_t count = 0;
        for (double v : s.values)
            if (v >= tau) ++count;
        curve.thresholds.push_back(tau);
        curve.fraction_detected.push_back(static_cast<double>(count) / static_cast<double>(s.values.size()));
    }
    return curve;
}

TonalHistogram tonal_histogram(const Frame& frame, const BoundingBox& box) {
    const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
    const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(box.x_max)));
    const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(box.y_max)));
    if (x0 >= x1 || y0 >= y1) throw InvalidRegion("histogram box does not cover any pixel");

    TonalHistogram hist;
    for (int y = y0; y < y1; ++y) {
        const std::uint8_t* px = frame.at(x0, y);
        for (int x = x0; x < x1; ++x, px += 3) {
            hist.channels[0][px[0]] += 1.0;
            hist.channels[1][px[1]] += 1.0;
            hist.channels[2][px[2]] += 1.0;
        }
    }
    const double total = static_cast<double>(x1 - x0) * (y1 - y0);
    for (auto& channel : hist.channels)
        for (double& bin : channel) bin /= total;
    return hist;
}

double histogram_l1(const std::array<double, 256>& a, const std::array<double, 256>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

double tonal_shift_l1(const TonalHistogram& a, const TonalHistogram& b) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) sum += histogram_l1(a.channels[c], b.channels[c]);
    return sum / 3.0;
}

std::vector<Track> iou_track(const std::vector<std::vector<Detection>>& detections_per_frame,
                             double match_threshold) {
    std::vector<Track> tracks;
    std::vector<std::size_t> open;  // indices into tracks still alive

    int next_id = 0;
    for (std::size_t f = 0; f < detections_per_frame.size(); ++f) {
        const auto& dets = detections_per_frame[f];

        struct Pair {
            double overlap;
            std::size_t open_idx;
            std::size_t det_idx;
        };
        std::vector<Pair> pairs;
        for (std::size_t ti = 0; ti < open.size(); ++ti) {
            const Track& track = tracks[open[ti]];
            for (std::size_t di = 0; di < dets.size(); ++di) {
                if (dets[di].class_label != track.class_label) continue;
                const double overlap = iou(track.entries.back().box, dets[di].box);
                if (overlap >= match_threshold) pairs.push_back({overlap, ti, di});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.overlap != b.overlap) return a.overlap > b.overlap;
            if (a.open_idx != b.open_idx) return a.open_idx < b.open_idx;
            return a.det_idx < b.det_idx;
        });

        std::vector<bool> track_used(open.size(), false);
        std::vector<bool> det_used(dets.size(), false);
        std::vector<std::size_t> still_open;
        for (const Pair& p : pairs) {
            if (track_used[p.open_idx] || det_used[p.det_idx]) continue;
            track_used[p.open_idx] = true;
            det_used[p.det_idx] = true;
            Track& track = tracks[open[p.open_idx]];
            track.entries.push_back(
                {static_cast<std::int64_t>(f), dets[p.det_idx].box, dets[p.det_idx].confidence});
            still_open.push_back(open[p.open_idx]);
        }
        for (std::size_t di = 0; di < dets.size(); ++di) {
            if (det_used[di]) continue;
            Track track;
            track.id = next_id++;
            track.class_label = dets[di].class_label;
            track.entries.push_back({static_cast<std::int64_t>(f), dets[di].box, dets[di].confidence});
            tracks.push_back(std::move(track));
            still_open.push_back(tracks.size() - 1);
        }
        open = std::move(still_open);
    }
    return tracks;
}

}  // namespace flarebench
