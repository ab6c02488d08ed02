#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include <nlohmann/json.hpp>

#include "flarebench/augment.hpp"
#include "flarebench/pipeline.hpp"
#include "flarebench/sim.hpp"

namespace flarebench {

/// Everything `simulate` needs, as stored in a sim config JSON file.
struct SimConfig {
    SceneConfig scene;
    FlasherPattern pattern;
    CameraModel camera;
    double duration_s = 30.0;
};

SimConfig sim_config_from_json(const nlohmann::json& j);  // throws InvalidArgument naming the field
nlohmann::json sim_config_to_json(const SimConfig& cfg);

AugmentationConfig augmentation_config_from_json(const nlohmann::json& j);

/// Backend config: {"kind":"reference", "car_box":[...], "config":{...}} or
/// {"kind":"worker", "cmd":[...]}. A reference backend without car_box can
/// borrow it from a sim_config.json next to the analyzed video.
struct BackendConfig {
    nlohmann::json raw;
    std::string kind;
};

BackendConfig backend_config_from_json(const nlohmann::json& j);
std::shared_ptr<DetectorBackend> make_backend(const BackendConfig& cfg,
                                              std::optional<BoundingBox> default_car_box = std::nullopt);

struct PipelineConfigJson {
    nlohmann::json denoiser;
    BackendConfig raw_detector;
    BackendConfig tuned_detector;
    CombinerConfig combiner;
};

PipelineConfigJson pipeline_config_from_json(const nlohmann::json& j);
std::unique_ptr<Pipeline> make_pipeline(const PipelineConfigJson& cfg,
                                        std::optional<BoundingBox> default_car_box = std::nullopt);

nlohmann::json load_json_file(const std::filesystem::path& path);  // throws IoError / InvalidArgument

/// Reads the effective (distance-scaled) car box recorded by `simulate`.
std::optional<BoundingBox> car_box_from_sim_dir(const std::filesystem::path& video_dir);

}  // namespace flarebench
