#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "flarebench/errors.hpp"

namespace flarebench {

/// Axis-aligned box in pixel coordinates, half-open on the max edges, so
/// area = (x_max - x_min) * (y_max - y_min) with no off-by-one ambiguity.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    bool valid() const { return x_min < x_max && y_min < y_max; }

    bool operator==(const BoundingBox&) const = default;
};

/// Intersection-over-union of two valid boxes. Symmetric, 0 when disjoint.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

struct Detection {
    BoundingBox box;
    std::string class_label = "car";
    double confidence = 0.0;

    bool operator==(const Detection&) const = default;
};

/// One RGB24 raster. Pixels are row-major, 3 bytes per pixel.
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, std::int64_t index = 0, std::int64_t timestamp_ms = 0)
        : width_(width),
          height_(height),
          index_(index),
          timestamp_ms_(timestamp_ms),
          pixels_(static_cast<std::size_t>(3) * width * height, 0) {
        if (width < 1 || height < 1) throw InvalidArgument("frame dimensions must be >= 1");
    }

    Frame(int width, int height, std::vector<std::uint8_t> pixels, std::int64_t index = 0,
          std::int64_t timestamp_ms = 0)
        : width_(width), height_(height), index_(index), timestamp_ms_(timestamp_ms), pixels_(std::move(pixels)) {
        if (width < 1 || height < 1) throw InvalidArgument("frame dimensions must be >= 1");
        if (pixels_.size() != static_cast<std::size_t>(3) * width * height)
            throw InvalidArgument("pixel byte count must equal 3*width*height");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t index() const { return index_; }
    std::int64_t timestamp_ms() const { return timestamp_ms_; }
    void set_index(std::int64_t i) { index_ = i; }
    void set_timestamp_ms(std::int64_t t) { timestamp_ms_ = t; }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    const std::uint8_t* at(int x, int y) const {
        return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
    }
    std::uint8_t* at(int x, int y) { return pixels_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x); }

    void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        for (std::size_t i = 0; i + 2 < pixels_.size(); i += 3) {
            pixels_[i] = r;
            pixels_[i + 1] = g;
            pixels_[i + 2] = b;
        }
    }

    bool contains(const BoundingBox& box) const {
        return box.x_min >= 0 && box.y_min >= 0 && box.x_max <= width_ && box.y_max <= height_;
    }

    bool operator==(const Frame&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::int64_t index_ = 0;
    std::int64_t timestamp_ms_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Mean over all pixels of (R+G+B)/3. Unweighted channel mean, not luma.
inline double mean_brightness(const Frame& f) {
    std::uint64_t sum = 0;
    for (std::uint8_t v : f.pixels()) sum += v;
    return static_cast<double>(sum) / static_cast<double>(f.pixels().size());
}

inline std::int64_t frame_timestamp_ms(std::int64_t index, double fps) {
    return std::llround(1000.0 * static_cast<double>(index) / fps);
}

/// Ordered frames at a fixed rate and resolution.
struct VideoSequence {
    std::vector<Frame> frames;
    double fps = 0.0;

    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }

    void validate() const {
        if (fps <= 0.0) throw InvalidArgument("fps must be > 0");
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const Frame& f = frames[i];
            if (f.width() != width() || f.height() != height())
                throw InvalidArgument("all frames must share one resolution");
            if (f.timestamp_ms() != frame_timestamp_ms(static_cast<std::int64_t>(i), fps))
                throw InvalidArgument("timestamps must equal round(1000*i/fps)");
        }
    }
};

enum class GapPolicy { ZeroFill };

/// Per-frame confidence for one tracked target, sampled at the video rate.
struct ConfidenceSignal {
    std::vector<double> values;
    double fps = 0.0;
    std::string target_class = "car";
    GapPolicy gap_policy = GapPolicy::ZeroFill;
};

}  // namespace flarebench
