#include <doctest.h>

#include <cmath>

#include "flarebench/sim.hpp"

using namespace flarebench;

namespace {

FlasherPattern blue_pattern(double freq = 1.3, double duty = 0.5) {
    FlasherPattern p;
    p.mode = FlasherMode::SingleColor;
    p.frequency_hz = freq;
    p.duty_cycle = duty;
    p.colors = {{60, 60, 255}};
    p.intensity = 1.0;
    return p;
}

SceneConfig small_scene() {
    SceneConfig s;
    s.width = 96;
    s.height = 72;
    s.ambient_lux = 20.0;
    s.car_albedo = 90;
    s.car_box = {28, 36, 68, 62};
    s.flasher_x = 48;
    s.flasher_y = 30;
    s.flasher_radius = 10;
    return s;
}

double frame_energy(const Frame& frame, const Frame& base) {
    double sum = 0.0;
    for (std::size_t i = 0; i < frame.pixels().size(); ++i)
        sum += static_cast<double>(frame.pixels()[i]) - static_cast<double>(base.pixels()[i]);
    return sum;
}

}  // namespace

TEST_CASE("waveform integral: duty 1 is always on, duty 0 always off") {
    CameraModel cam;
    cam.fps = 24;
    cam.exposure_fraction = 0.5;
    for (int i = 0; i < 50; ++i) {
        CHECK(waveform_integral(blue_pattern(1.3, 1.0), cam, i) == doctest::Approx(1.0));
        CHECK(waveform_integral(blue_pattern(1.3, 0.0), cam, i) == doctest::Approx(0.0));
    }
}

TEST_CASE("waveform integral: 1 Hz duty 0.5 at 4 fps full exposure") {
    CameraModel cam;
    cam.fps = 4;
    cam.exposure_fraction = 1.0;
    const FlasherPattern p = blue_pattern(1.0, 0.5);
    // Window [0, 0.25): entirely inside the ON half of the phase-0 square wave.
    CHECK(waveform_integral(p, cam, 0) == doctest::Approx(1.0));
    CHECK(waveform_integral(p, cam, 1) == doctest::Approx(1.0));
    CHECK(waveform_integral(p, cam, 2) == doctest::Approx(0.0));
    CHECK(waveform_integral(p, cam, 3) == doctest::Approx(0.0));
}

TEST_CASE("waveform integral handles windows straddling an edge") {
    CameraModel cam;
    cam.fps = 3;  // window [1/3, 2/3) straddles the 0.5 edge
    cam.exposure_fraction = 1.0;
    const FlasherPattern p = blue_pattern(1.0, 0.5);
    CHECK(waveform_integral(p, cam, 1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("steady off renders the base frame for every sample") {
    FlasherPattern off;
    off.mode = FlasherMode::SteadyOff;
    CameraModel cam;
    cam.fps = 12;
    cam.noise_sigma = 0.0;

    const auto [seq, truth] = render_sequence(small_scene(), off, cam, 1.0, 1);
    REQUIRE(seq.frames.size() == 12);
    for (const auto& gt : truth.frames) CHECK(gt.intensity == 0.0);
    for (const auto& frame : seq.frames) CHECK(frame.pixels() == seq.frames.front().pixels());
}

TEST_CASE("1.3 Hz for 30 s gives 39 full cycles of ground truth") {
    const FlasherPattern p = blue_pattern(1.3, 0.5);
    // Complete periods inside 30 s: floor(30 * 1.3), tolerating the binary
    // representation of 1.3 sitting a hair above the decimal value.
    const int cycles = static_cast<int>(std::floor(30.0 * 1.3 + 1e-9));
    CHECK(cycles == 39);

    // The rendered ground truth covers the same cycle starts.
    CameraModel cam;
    cam.fps = 24;
    const auto [seq, truth] = render_sequence(small_scene(), p, cam, 30.0, 1);
    REQUIRE(truth.frames.size() == 720);
    int rising = 0;
    bool prev_on = true;  // phase 0 starts ON; the first frame is not a rising edge
    for (const auto& gt : truth.frames) {
        const bool on = gt.intensity > 0.5;
        if (on && !prev_on) ++rising;
        prev_on = on;
    }
    CHECK(rising + 1 == 39);  // initial ON period plus 38 later rises
}

TEST_CASE("alternating colors swap every half period") {
    FlasherPattern p;
    p.mode = FlasherMode::AlternatingTwoColor;
    p.frequency_hz = 1.0;
    p.duty_cycle = 1.0;
    p.colors = {{255, 40, 40}, {60, 60, 255}};

    CHECK(active_color(p, 0.1) == Rgb{255, 40, 40});
    CHECK(active_color(p, 0.6) == Rgb{60, 60, 255});
    CHECK(active_color(p, 1.1) == Rgb{255, 40, 40});
    CHECK(active_color(p, 1.7) == Rgb{60, 60, 255});
}

TEST_CASE("double burst emits two pulses per period") {
    FlasherPattern p;
    p.mode = FlasherMode::DoubleBurst;
    p.frequency_hz = 1.0;
    p.colors = {{60, 60, 255}};
    // Exact ON time per period: 2 * 60 ms.
    CHECK(waveform_on_seconds(p, 0.0, 1.0) == doctest::Approx(0.12).epsilon(1e-9));
    CHECK(waveform_on_seconds(p, 0.0, 0.06) == doctest::Approx(0.06).epsilon(1e-9));
    CHECK(waveform_on_seconds(p, 0.06, 0.14) == doctest::Approx(0.0));
    CHECK(waveform_on_seconds(p, 0.14, 0.20) == doctest::Approx(0.06).epsilon(1e-9));
}

TEST_CASE("render is deterministic per seed, including noise") {
    CameraModel cam;
    cam.fps = 12;
    cam.noise_sigma = 3.0;
    const auto [a, ta] = render_sequence(small_scene(), blue_pattern(), cam, 0.5, 77);
    const auto [b, tb] = render_sequence(small_scene(), blue_pattern(), cam, 0.5, 77);
    const auto [c, tc] = render_sequence(small_scene(), blue_pattern(), cam, 0.5, 78);
    for (std::size_t i = 0; i < a.frames.size(); ++i) CHECK(a.frames[i].pixels() == b.frames[i].pixels());
    bool any_diff = false;
    for (std::size_t i = 0; i < a.frames.size(); ++i)
        if (a.frames[i].pixels() != c.frames[i].pixels()) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("flare energy grows with exposure fraction") {
    FlasherPattern off;
    off.mode = FlasherMode::SteadyOff;
    CameraModel cam;
    cam.fps = 24;

    double prev_total = -1.0;
    for (int step = 1; step <= 10; ++step) {
        cam.exposure_fraction = step / 10.0;
        const auto [base_seq, bt] = render_sequence(small_scene(), off, cam, 1.0, 5);
        const auto [seq, t] = render_sequence(small_scene(), blue_pattern(1.3, 0.5), cam, 1.0, 5);
        double total = 0.0;
        for (std::size_t i = 0; i < seq.frames.size(); ++i)
            total += frame_energy(seq.frames[i], base_seq.frames[i]);
        CHECK(total >= prev_total);
        prev_total = total;
    }
}

TEST_CASE("iso gain raises mean brightness when light is present") {
    CameraModel low;
    low.fps = 12;
    low.iso_gain = 1.0;
    CameraModel high = low;
    high.iso_gain = 2.0;

    const auto [a, ta] = render_sequence(small_scene(), blue_pattern(), low, 0.25, 3);
    const auto [b, tb] = render_sequence(small_scene(), blue_pattern(), high, 0.25, 3);
    CHECK(mean_brightness(b.frames[0]) > mean_brightness(a.frames[0]));
}

TEST_CASE("waveform integrals agree across fps at matching instants") {
    const FlasherPattern p = blue_pattern(1.3, 0.37);
    const double window_s = 1.0 / 240.0;  // same absolute exposure everywhere
    for (double fps : {24.0, 30.0, 60.0, 120.0}) {
        CameraModel cam;
        cam.fps = fps;
        cam.exposure_fraction = window_s * fps;
        for (int sixth = 0; sixth < 12; ++sixth) {
            const double t = sixth / 6.0;
            const auto index = static_cast<std::int64_t>(std::llround(t * fps));
            const double got = waveform_integral(p, cam, index);
            const double want = waveform_on_seconds(p, t, t + window_s) / window_s;
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("scene validation catches impossible geometry") {
    SceneConfig scene = small_scene();
    scene.car_box = {80, 36, 140, 62};  // pokes outside the 96-wide frame
    CHECK_THROWS_AS(render_sequence(scene, blue_pattern(), CameraModel{}, 1.0, 1), InvalidScene);

    SceneConfig below = small_scene();
    below.flasher_y = 70;  // below the car box
    CHECK_THROWS_AS(render_sequence(below, blue_pattern(), CameraModel{}, 1.0, 1), InvalidScene);

    CHECK_THROWS_AS(render_sequence(small_scene(), blue_pattern(-1.0), CameraModel{}, 1.0, 1), InvalidArgument);
}

TEST_CASE("distance scale shrinks the effective car box") {
    SceneConfig scene = small_scene();
    scene.distance_scale = 0.5;
    const auto [seq, truth] = render_sequence(scene, blue_pattern(), CameraModel{}, 0.25, 1);
    CHECK(truth.car_box.width() == doctest::Approx(scene.car_box.width() * 0.5));
    CHECK(truth.car_box.height() == doctest::Approx(scene.car_box.height() * 0.5));
}
