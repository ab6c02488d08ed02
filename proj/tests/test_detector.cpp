#include <doctest.h>

#include "flarebench/detector.hpp"
#include "flarebench/rng.hpp"

using namespace flarebench;

namespace {

// Paints the dilated measurement region around `box` with a single value.
Frame region_frame(int w, int h, const BoundingBox& box, int dilation, std::uint8_t inside,
                   double fraction_at = 1.0) {
    Frame f(w, h);
    const int x0 = std::max(0, static_cast<int>(box.x_min) - dilation);
    const int y0 = std::max(0, static_cast<int>(box.y_min) - dilation);
    const int x1 = std::min(w, static_cast<int>(box.x_max) + dilation);
    const int y1 = std::min(h, static_cast<int>(box.y_max) + dilation);
    const int total = (x1 - x0) * (y1 - y0);
    int to_paint = static_cast<int>(total * fraction_at);
    for (int y = y0; y < y1 && to_paint > 0; ++y)
        for (int x = x0; x < x1 && to_paint > 0; ++x, --to_paint) {
            auto* px = f.at(x, y);
            px[0] = px[1] = px[2] = inside;
        }
    return f;
}

}  // namespace

TEST_CASE("reference detector: clear scene gives c_clear") {
    const BoundingBox box{20, 20, 60, 50};
    ReferenceDetector det({}, box);
    Frame dark(100, 80);
    dark.fill(40, 40, 40);  // nothing saturated
    const auto dets = det.detect(dark);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].class_label == "car");
    CHECK(dets[0].box == box);
    CHECK(dets[0].confidence == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("reference detector: fully saturated region gives 0.1425") {
    const BoundingBox box{20, 20, 60, 50};
    ReferenceDetector det({}, box);
    const Frame frame = region_frame(100, 80, box, 8, 255, 1.0);
    const auto dets = det.detect(frame);
    REQUIRE(dets.size() == 1);
    // 0.95 * (1 - 0.85) with E = 1.
    CHECK(dets[0].confidence == doctest::Approx(0.1425).epsilon(1e-12));
}

TEST_CASE("reference detector: E = 0.5 gives 0.54625") {
    const BoundingBox box{20, 20, 60, 50};
    ReferenceDetector det({}, box);
    // Half the measured pixels at 255 (excess 1), half at 0 (excess 0).
    const Frame frame = region_frame(100, 80, box, 8, 255, 0.5);
    CHECK(flare_excess(frame, box, {}) == doctest::Approx(0.5).epsilon(1e-12));
    const auto dets = det.detect(frame);
    // 0.95 * (1 - 0.85 * 0.5).
    CHECK(dets[0].confidence == doctest::Approx(0.54625).epsilon(1e-12));
}

TEST_CASE("confidence never rises when pixels saturate harder") {
    const BoundingBox box{10, 10, 40, 34};
    ReferenceDetector det({}, box);
    Rng rng(12);
    double prev_conf = 1.0;
    // Ramp the painted fraction up; E rises, confidence must not.
    for (int step = 0; step <= 10; ++step) {
        const Frame frame = region_frame(64, 48, box, 8, 255, step / 10.0);
        const auto dets = det.detect(frame);
        CHECK(dets[0].confidence <= prev_conf + 1e-12);
        prev_conf = dets[0].confidence;
    }
}

TEST_CASE("pixels at or below the saturation level contribute nothing") {
    const BoundingBox box{10, 10, 40, 34};
    const Frame frame = region_frame(64, 48, box, 8, 240, 1.0);
    CHECK(flare_excess(frame, box, {}) == 0.0);

    const Frame above = region_frame(64, 48, box, 8, 248, 1.0);
    CHECK(flare_excess(above, box, {}) == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("reference config validation") {
    ReferenceDetectorConfig bad;
    bad.c_clear = 1.5;
    CHECK_THROWS_AS(ReferenceDetector(bad, BoundingBox{0, 0, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(ReferenceDetector({}, BoundingBox{5, 5, 5, 9}), InvalidArgument);
}

TEST_CASE("scripted detector replays its script by frame index") {
    std::vector<std::vector<Detection>> script{
        {{{0, 0, 5, 5}, "car", 0.9}},
        {},
        {{{1, 1, 6, 6}, "car", 0.4}},
    };
    ScriptedDetector det(script);
    Frame f(8, 8);
    f.set_index(2);
    CHECK(det.detect(f).at(0).confidence == 0.4);
    f.set_index(1);
    CHECK(det.detect(f).empty());
    f.set_index(5);
    CHECK(det.detect(f).empty());
}
