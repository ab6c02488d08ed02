#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "flarebench/ppm.hpp"
#include "flarebench/rng.hpp"
#include "flarebench/types.hpp"

using namespace flarebench;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("flarebench_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("iou identity and disjoint cases") {
    const BoundingBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
    // Boxes sharing only an edge have zero intersection under half-open bounds.
    CHECK(iou(a, {10, 0, 20, 10}) == 0.0);
}

TEST_CASE("iou overlap: intersection 50, union 150") {
    const BoundingBox a{0, 0, 10, 10};
    const BoundingBox b{5, 0, 15, 10};
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(iou(b, a) == doctest::Approx(iou(a, b)).epsilon(1e-15));
}

TEST_CASE("iou is symmetric and bounded on random boxes") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        auto make_box = [&] {
            const double x0 = rng.next_uniform(0, 90);
            const double y0 = rng.next_uniform(0, 90);
            return BoundingBox{x0, y0, x0 + rng.next_uniform(1, 30), y0 + rng.next_uniform(1, 30)};
        };
        const BoundingBox a = make_box();
        const BoundingBox b = make_box();
        const double ab = iou(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == doctest::Approx(iou(b, a)).epsilon(1e-15));
        CHECK(iou(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("mean_brightness edge values") {
    Frame black(4, 4);
    CHECK(mean_brightness(black) == 0.0);

    Frame white(4, 4);
    white.fill(255, 255, 255);
    CHECK(mean_brightness(white) == 255.0);
}

TEST_CASE("mean_brightness half black half gray 120 is 60") {
    Frame f(10, 2);
    for (int x = 0; x < 10; ++x) {
        auto* px = f.at(x, 1);
        px[0] = px[1] = px[2] = 120;
    }
    CHECK(mean_brightness(f) == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("mean_brightness invariant under pixel permutation") {
    Rng rng(11);
    Frame f(8, 8);
    for (auto& b : f.pixels()) b = static_cast<std::uint8_t>(rng.next_int(0, 255));
    const double before = mean_brightness(f);

    // Reverse whole pixels.
    Frame g(8, 8);
    const int n = 64;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) g.pixels()[3 * i + c] = f.pixels()[3 * (n - 1 - i) + c];
    CHECK(mean_brightness(g) == before);
}

TEST_CASE("frame invariants are enforced") {
    CHECK_THROWS_AS(Frame(0, 4), InvalidArgument);
    CHECK_THROWS_AS(Frame(2, 2, std::vector<std::uint8_t>(5)), InvalidArgument);
}

TEST_CASE("sequence timestamps reconstruct from fps and index") {
    VideoSequence seq;
    seq.fps = 36.0;
    for (int i = 0; i < 10; ++i) seq.frames.emplace_back(4, 4, i, frame_timestamp_ms(i, 36.0));
    CHECK_NOTHROW(seq.validate());
    CHECK(seq.frames[1].timestamp_ms() == 28);  // round(1000/36)
    CHECK(seq.frames[9].timestamp_ms() == 250);

    seq.frames[3].set_timestamp_ms(9999);
    CHECK_THROWS_AS(seq.validate(), InvalidArgument);
}

TEST_CASE("ppm round-trips pixel-exactly") {
    const auto dir = temp_dir("ppm");
    Rng rng(3);
    Frame f(13, 7);
    for (auto& b : f.pixels()) b = static_cast<std::uint8_t>(rng.next_int(0, 255));

    write_ppm(dir / "a.ppm", f);
    const Frame g = read_ppm(dir / "a.ppm");
    CHECK(g.width() == 13);
    CHECK(g.height() == 7);
    CHECK(g.pixels() == f.pixels());
}

TEST_CASE("ppm reader accepts comments and rejects junk") {
    const auto dir = temp_dir("ppm_hdr");
    {
        std::ofstream out(dir / "comment.ppm", std::ios::binary);
        out << "P6\n# a comment\n2 1\n255\n";
        const char px[6] = {1, 2, 3, 4, 5, 6};
        out.write(px, 6);
    }
    const Frame f = read_ppm(dir / "comment.ppm");
    CHECK(f.width() == 2);
    CHECK(f.at(1, 0)[2] == 6);

    {
        std::ofstream out(dir / "bad.ppm", std::ios::binary);
        out << "P5\n2 1\n255\n..";
    }
    CHECK_THROWS_AS(read_ppm(dir / "bad.ppm"), IoError);

    {
        std::ofstream out(dir / "short.ppm", std::ios::binary);
        out << "P6\n4 4\n255\nxx";
    }
    CHECK_THROWS_AS(read_ppm(dir / "short.ppm"), IoError);
}

TEST_CASE("sequence save/load preserves frames and manifest") {
    const auto dir = temp_dir("seq");
    VideoSequence seq;
    seq.fps = 24.0;
    Rng rng(5);
    for (int i = 0; i < 4; ++i) {
        Frame f(6, 5, i, frame_timestamp_ms(i, 24.0));
        for (auto& b : f.pixels()) b = static_cast<std::uint8_t>(rng.next_int(0, 255));
        seq.frames.push_back(std::move(f));
    }
    save_sequence(dir / "video", seq);
    CHECK(std::filesystem::exists(dir / "video" / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "video" / "frame_000003.ppm"));

    const VideoSequence loaded = load_sequence(dir / "video");
    CHECK(loaded.fps == 24.0);
    REQUIRE(loaded.frames.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(loaded.frames[i].pixels() == seq.frames[i].pixels());
}
