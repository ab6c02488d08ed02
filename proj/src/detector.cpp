#include "flarebench/detector.hpp"

#include <algorithm>
#include <cmath>

namespace flarebench {

void ReferenceDetectorConfig::validate() const {
    if (!(c_clear > 0.0 && c_clear <= 1.0)) throw InvalidArgument("reference.c_clear must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("reference.gamma must be in [0, 1]");
    if (saturation_level < 0 || saturation_level > 254)
        throw InvalidArgument("reference.saturation_level must be in [0, 254]");
    if (dilation < 0) throw InvalidArgument("reference.dilation must be >= 0");
}

double flare_excess(const Frame& frame, const BoundingBox& box, const ReferenceDetectorConfig& cfg) {
    const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min)) - cfg.dilation);
    const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min)) - cfg.dilation);
    const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(box.x_max)) + cfg.dilation);
    const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(box.y_max)) + cfg.dilation);
    if (x0 >= x1 || y0 >= y1) return 0.0;

    const double denom = 255.0 - cfg.saturation_level;
    double sum = 0.0;
    for (int y = y0; y < y1; ++y) {
        const std::uint8_t* px = frame.at(x0, y);
        for (int x = x0; x < x1; ++x, px += 3) {
            const int max_ch = std::max({px[0], px[1], px[2]});
            if (max_ch > cfg.saturation_level) sum += (max_ch - cfg.saturation_level) / denom;
        }
    }
    return sum / (static_cast<double>(x1 - x0) * (y1 - y0));
}

ReferenceDetector::ReferenceDetector(ReferenceDetectorConfig cfg, BoundingBox car_box)
    : cfg_(cfg), car_box_(car_box) {
    cfg_.validate();
    if (!car_box_.valid()) throw InvalidArgument("reference.car_box must have positive extent");
}

Capabilities ReferenceDetector::capabilities() const { return {"reference", {"car"}, std::nullopt}; }

std::vector<Detection> ReferenceDetector::detect(const Frame& frame) {
    if (iou(car_box_, {0, 0, static_cast<double>(frame.width()), static_cast<double>(frame.height())}) <= 0.0)
        throw InvalidArgument("reference.car_box does not intersect the frame");
    const double excess = flare_excess(frame, car_box_, cfg_);
    const double confidence = std::clamp(cfg_.c_clear * (1.0 - cfg_.gamma * excess), 0.0, 1.0);
    return {Detection{car_box_, "car", confidence}};
}

ScriptedDetector::ScriptedDetector(std::vector<std::vector<Detection>> per_frame, std::string name)
    : per_frame_(std::move(per_frame)), name_(std::move(name)) {}

Capabilities ScriptedDetector::capabilities() const { return {name_, {"car"}, std::nullopt}; }

std::vector<Detection> ScriptedDetector::detect(const Frame& frame) {
    const auto i = static_cast<std::size_t>(frame.index());
    if (i >= per_frame_.size()) return {};
    return per_frame_[i];
}

}  // namespace flarebench
