#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "flarebench/rng.hpp"
#include "flarebench/signal_analysis.hpp"

using namespace flarebench;

namespace {

ConfidenceSignal make_signal(std::vector<double> values, double fps = 24.0) {
    ConfidenceSignal s;
    s.values = std::move(values);
    s.fps = fps;
    return s;
}

// Independent oracle: direct O(N^2) transform, no shared code with dft().
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& in) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
            acc += in[j] * std::complex<double>{std::cos(angle), std::sin(angle)};
        }
        out[k] = acc;
    }
    return out;
}

Detection det(double x0, double y0, double x1, double y1, double conf, std::string cls = "car") {
    return {{x0, y0, x1, y1}, std::move(cls), conf};
}

}  // namespace

TEST_CASE("extract_signal: one detection per frame passes confidences through") {
    std::vector<std::vector<Detection>> frames{
        {det(0, 0, 10, 10, 0.9)}, {det(0, 0, 10, 10, 0.3)}, {det(1, 0, 11, 10, 0.7)}};
    const auto signal = extract_signal(frames, "car", 24.0);
    CHECK(signal.values == std::vector<double>{0.9, 0.3, 0.7});
    CHECK(signal.gap_policy == GapPolicy::ZeroFill);
}

TEST_CASE("extract_signal: a gap records 0.0 and neighbors are unchanged") {
    std::vector<std::vector<Detection>> frames{
        {det(0, 0, 10, 10, 0.9)}, {}, {det(0, 0, 10, 10, 0.8)}};
    const auto signal = extract_signal(frames, "car", 24.0);
    CHECK(signal.values == std::vector<double>{0.9, 0.0, 0.8});
}

TEST_CASE("extract_signal: roi keeps tracking the weaker target") {
    // Car A near the origin, car B with higher confidence elsewhere.
    std::vector<std::vector<Detection>> frames;
    for (int i = 0; i < 5; ++i) {
        const double drift = 0.5 * i;
        frames.push_back({det(0 + drift, 0, 10 + drift, 10, 0.4 + 0.01 * i),
                          det(50, 50, 70, 70, 0.99)});
    }
    const auto signal = extract_signal(frames, "car", 24.0, BoundingBox{0, 0, 10, 10});
    for (int i = 0; i < 5; ++i) CHECK(signal.values[i] == doctest::Approx(0.4 + 0.01 * i));
}

TEST_CASE("extract_signal: seeds from highest confidence when no roi") {
    std::vector<std::vector<Detection>> frames{
        {det(0, 0, 10, 10, 0.5), det(50, 50, 70, 70, 0.9)},
        {det(0, 0, 10, 10, 0.6), det(50, 50, 70, 70, 0.7)}};
    const auto signal = extract_signal(frames, "car", 24.0);
    CHECK(signal.values == std::vector<double>{0.9, 0.7});
}

TEST_CASE("extract_signal: falls back to highest confidence when IoU dies") {
    std::vector<std::vector<Detection>> frames{
        {det(0, 0, 10, 10, 0.5)},
        {det(80, 80, 95, 95, 0.6)}};  // no overlap with the previous box
    const auto signal = extract_signal(frames, "car", 24.0);
    CHECK(signal.values == std::vector<double>{0.5, 0.6});
}

TEST_CASE("extract_signal: NoTarget when the class never appears") {
    std::vector<std::vector<Detection>> frames{{det(0, 0, 10, 10, 0.9, "person")}, {}};
    CHECK_THROWS_AS(extract_signal(frames, "car", 24.0), NoTarget);
}

TEST_CASE("metrics of the worked example") {
    const auto m = compute_metrics(make_signal({0.9, 0.3, 0.8, 0.4, 0.6}));
    CHECK(m.average == doctest::Approx(0.60).epsilon(1e-12));
    CHECK(m.minimum == 0.3);
    CHECK(m.maximum == 0.9);
    CHECK(m.range == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.fraction_above[0] == doctest::Approx(0.6).epsilon(1e-12));  // >= 0.5
    CHECK(m.fraction_above[1] == doctest::Approx(0.6).epsilon(1e-12));  // >= 0.6
    CHECK(m.fraction_above[2] == doctest::Approx(0.4).epsilon(1e-12));  // >= 0.7
    CHECK(m.fraction_above[3] == doctest::Approx(0.4).epsilon(1e-12));  // >= 0.8
}

TEST_CASE("metrics of a constant signal") {
    const auto m = compute_metrics(make_signal(std::vector<double>(10, 0.7)));
    CHECK(m.range == 0.0);
    CHECK(m.fraction_above[0] == 1.0);
    CHECK(m.fraction_above[1] == 1.0);
    CHECK(m.fraction_above[2] == 1.0);  // closed comparison keeps 0.7 >= 0.7
    CHECK(m.fraction_above[3] == 0.0);
    CHECK_THROWS_AS(compute_metrics(make_signal({})), EmptySignal);
}

TEST_CASE("metrics match a brute-force recomputation on random signals") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(rng.next_int(1, 400));
        std::vector<double> values(n);
        for (double& v : values) v = rng.next_unit();
        const auto m = compute_metrics(make_signal(values));

        double sum = 0.0, mn = 1.0, mx = 0.0;
        for (double v : values) {
            sum += v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        CHECK(std::abs(m.average - sum / n) <= 1e-9);
        CHECK(m.minimum == mn);
        CHECK(m.maximum == mx);
        CHECK(std::abs(m.range - (mx - mn)) <= 1e-9);
        for (std::size_t t = 0; t < SignalMetrics::kThresholds.size(); ++t) {
            int count = 0;
            for (double v : values)
                if (v >= SignalMetrics::kThresholds[t]) ++count;
            CHECK(std::abs(m.fraction_above[t] - static_cast<double>(count) / n) <= 1e-9);
        }
    }
}

TEST_CASE("dft matches the naive oracle on assorted sizes") {
    Rng rng(55);
    for (std::size_t n : {16u, 24u, 37u, 60u, 128u, 243u, 720u}) {
        std::vector<std::complex<double>> in(n);
        for (auto& v : in) v = {rng.next_uniform(-1, 1), rng.next_uniform(-1, 1)};
        const auto fast = dft(in);
        const auto slow = naive_dft(in);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(fast[k] - slow[k]) <= 1e-8 * static_cast<double>(n));
    }
}

TEST_CASE("spectrum: constant signal reports no peak") {
    const auto spec = spectrum(make_signal(std::vector<double>(64, 0.8)));
    CHECK_FALSE(spec.dominant.has_value());
    for (std::size_t k = 1; k < spec.magnitudes.size(); ++k) CHECK(spec.magnitudes[k] <= 1e-9);
}

TEST_CASE("spectrum rejects short signals") {
    CHECK_THROWS_AS(spectrum(make_signal(std::vector<double>(15, 0.5))), InsufficientSamples);
}

TEST_CASE("spectrum finds a 1.3 Hz square wave at 24 fps") {
    const double fps = 24.0;
    const int n = 720;  // 30 s
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        const double t = i / fps;
        const double phase = t * 1.3 - std::floor(t * 1.3);
        values[i] = phase < 0.5 ? 0.95 : 0.2;
    }
    const auto spec = spectrum(make_signal(values, fps));
    REQUIRE(spec.dominant.has_value());
    CHECK(spec.dominant->frequency_hz == doctest::Approx(1.3).epsilon(0.03));
    CHECK(spec.dominant->resolution_hz == doctest::Approx(fps / n));
    CHECK(std::abs(spec.dominant->frequency_hz - 1.3) <= fps / n + 1e-12);
    // Frequencies stay below Nyquist.
    CHECK(spec.frequencies.back() <= fps / 2.0 + 1e-12);
}

TEST_CASE("detection loss: all 0.9 is a step function") {
    const auto curve = detection_loss(make_signal(std::vector<double>(8, 0.9)));
    REQUIRE(curve.thresholds.size() == 101);
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
        if (curve.thresholds[i] <= 0.9)
            CHECK(curve.fraction_detected[i] == 1.0);
        else
            CHECK(curve.fraction_detected[i] == 0.0);
    }
}

TEST_CASE("detection loss of [0.2, 0.6, 1.0]") {
    const auto curve = detection_loss(make_signal({0.2, 0.6, 1.0}));
    CHECK(curve.fraction_detected[50] == doctest::Approx(2.0 / 3.0));
    CHECK(curve.fraction_detected[0] == 1.0);
    CHECK(curve.fraction_detected[100] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("detection loss is monotone and consistent with metrics") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(static_cast<std::size_t>(rng.next_int(1, 300)));
        for (double& v : values) v = rng.next_unit();
        const auto signal = make_signal(values);
        const auto curve = detection_loss(signal);
        const auto m = compute_metrics(signal);

        for (std::size_t i = 1; i < curve.fraction_detected.size(); ++i)
            CHECK(curve.fraction_detected[i] <= curve.fraction_detected[i - 1] + 1e-15);
        CHECK(curve.fraction_detected[50] == m.fraction_above[0]);
        CHECK(curve.fraction_detected[60] == m.fraction_above[1]);
        CHECK(curve.fraction_detected[70] == m.fraction_above[2]);
        CHECK(curve.fraction_detected[80] == m.fraction_above[3]);
    }
}

TEST_CASE("tonal histogram of a uniform region is a delta") {
    Frame f(20, 20);
    f.fill(33, 66, 99);
    const auto hist = tonal_histogram(f, {2, 2, 18, 18});
    CHECK(hist.channels[0][33] == 1.0);
    CHECK(hist.channels[1][66] == 1.0);
    CHECK(hist.channels[2][99] == 1.0);
    CHECK(histogram_l1(hist.channels[0], hist.channels[0]) == 0.0);
    CHECK(tonal_shift_l1(hist, hist) == 0.0);
}

TEST_CASE("tonal histogram normalizes and rejects degenerate boxes") {
    Frame f(10, 10);
    const auto hist = tonal_histogram(f, {0, 0, 10, 10});
    for (const auto& channel : hist.channels) {
        double sum = 0.0;
        for (double v : channel) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tonal_histogram(f, {20, 20, 30, 30}), InvalidRegion);
}

TEST_CASE("blue flare shifts blue histogram mass upward") {
    Frame plain(40, 40);
    plain.fill(50, 50, 50);
    Frame flared = plain;
    for (int y = 10; y < 30; ++y)
        for (int x = 10; x < 30; ++x) flared.at(x, y)[2] = 250;

    const BoundingBox box{5, 5, 35, 35};
    const auto h0 = tonal_histogram(plain, box);
    const auto h1 = tonal_histogram(flared, box);
    const double dist = histogram_l1(h0.channels[2], h1.channels[2]);
    CHECK(dist > 0.0);
    CHECK(dist <= 2.0);

    double high_mass = 0.0;
    for (int bin = 200; bin < 256; ++bin) high_mass += h1.channels[2][bin];
    CHECK(high_mass > 0.0);
    CHECK(tonal_shift_l1(h0, h1) > 0.0);
}

TEST_CASE("tracker: one persistent object yields one full-span track") {
    std::vector<std::vector<Detection>> frames;
    for (int i = 0; i < 6; ++i) frames.push_back({det(10 + i, 10, 30 + i, 30, 0.5 + 0.05 * i)});
    const auto tracks = iou_track(frames);
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].entries.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(tracks[0].entries[i].confidence == doctest::Approx(0.5 + 0.05 * i));
}

TEST_CASE("tracker never alters per-frame confidences") {
    Rng rng(81);
    std::vector<std::vector<Detection>> frames(20);
    for (auto& dets : frames) {
        const int n = static_cast<int>(rng.next_int(0, 4));
        for (int i = 0; i < n; ++i) {
            const double x0 = rng.next_uniform(0, 80);
            const double y0 = rng.next_uniform(0, 80);
            dets.push_back(det(x0, y0, x0 + 15, y0 + 15, rng.next_unit()));
        }
    }
    const auto tracks = iou_track(frames);
    for (const auto& track : tracks)
        for (const auto& entry : track.entries) {
            bool found = false;
            for (const auto& d : frames[static_cast<std::size_t>(entry.frame_index)])
                if (d.box == entry.box && d.confidence == entry.confidence) found = true;
            CHECK(found);
        }
}

TEST_CASE("tracker keeps two distant crossing objects apart") {
    // Two objects far apart vertically; IoU between them is always < 0.3
    // while each object overlaps its own previous box well above it.
    std::vector<std::vector<Detection>> frames;
    for (int i = 0; i < 4; ++i) {
        const double xa = 10 + 2 * i;
        const double xb = 25 - 2 * i;
        frames.push_back({det(xa, 0, xa + 8, 8, 0.9), det(xb, 40, xb + 8, 48, 0.8)});
    }
    const auto tracks = iou_track(frames);
    REQUIRE(tracks.size() == 2);
    for (const auto& track : tracks) {
        REQUIRE(track.entries.size() == 4);
        const double first_conf = track.entries[0].confidence;
        for (const auto& entry : track.entries) CHECK(entry.confidence == first_conf);
    }
}
