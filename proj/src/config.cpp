#include "flarebench/config.hpp"

#include <fstream>

#include "flarebench/worker_client.hpp"

namespace flarebench {

namespace {

double get_number(const nlohmann::json& j, const std::string& field, double fallback, bool required = false) {
    if (!j.contains(field)) {
        if (required) throw InvalidArgument("missing required field: " + field);
        return fallback;
    }
    if (!j.at(field).is_number()) throw InvalidArgument("field must be a number: " + field);
    return j.at(field).get<double>();
}

Rgb rgb_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) throw InvalidArgument(field + " must be [r, g, b]");
    for (const auto& v : j)
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 255)
            throw InvalidArgument(field + " components must be integers in [0, 255]");
    return {j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

BoundingBox box_from_json(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 4) throw InvalidArgument(field + " must be [x_min, y_min, x_max, y_max]");
    BoundingBox box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!box.valid()) throw InvalidArgument(field + " must satisfy x_min < x_max and y_min < y_max");
    return box;
}

FlasherMode mode_from_string(const std::string& name) {
    if (name == "steady_off") return FlasherMode::SteadyOff;
    if (name == "single_color") return FlasherMode::SingleColor;
    if (name == "alternating_two_color") return FlasherMode::AlternatingTwoColor;
    if (name == "double_burst") return FlasherMode::DoubleBurst;
    throw InvalidArgument("pattern.mode must be one of steady_off, single_color, alternating_two_color, "
                          "double_burst (got '" + name + "')");
}

std::string mode_to_string(FlasherMode mode) {
    switch (mode) {
        case FlasherMode::SteadyOff: return "steady_off";
        case FlasherMode::SingleColor: return "single_color";
        case FlasherMode::AlternatingTwoColor: return "alternating_two_color";
        case FlasherMode::DoubleBurst: return "double_burst";
    }
    return "single_color";
}

}  // namespace

SimConfig sim_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("sim config must be a JSON object");
    SimConfig cfg;

    if (j.contains("scene")) {
        const auto& s = j.at("scene");
        cfg.scene.width = static_cast<int>(get_number(s, "width", cfg.scene.width));
        cfg.scene.height = static_cast<int>(get_number(s, "height", cfg.scene.height));
        cfg.scene.ambient_lux = get_number(s, "ambient_lux", cfg.scene.ambient_lux);
        cfg.scene.car_albedo = static_cast<int>(get_number(s, "car_albedo", cfg.scene.car_albedo));
        if (s.contains("car_box")) cfg.scene.car_box = box_from_json(s.at("car_box"), "scene.car_box");
        if (s.contains("flasher_position")) {
            const auto& p = s.at("flasher_position");
            if (!p.is_array() || p.size() != 2) throw InvalidArgument("scene.flasher_position must be [x, y]");
            cfg.scene.flasher_x = p[0].get<int>();
            cfg.scene.flasher_y = p[1].get<int>();
        }
        cfg.scene.flasher_radius = static_cast<int>(get_number(s, "flasher_radius", cfg.scene.flasher_radius));
        cfg.scene.distance_scale = get_number(s, "distance_scale", cfg.scene.distance_scale);
    }

    if (j.contains("pattern")) {
        const auto& p = j.at("pattern");
        if (p.contains("mode")) cfg.pattern.mode = mode_from_string(p.at("mode").get<std::string>());
        cfg.pattern.frequency_hz = get_number(p, "frequency_hz", cfg.pattern.frequency_hz);
        cfg.pattern.duty_cycle = get_number(p, "duty_cycle", cfg.pattern.duty_cycle);
        cfg.pattern.intensity = get_number(p, "intensity", cfg.pattern.intensity);
        if (p.contains("colors")) {
            cfg.pattern.colors.clear();
            for (const auto& c : p.at("colors")) cfg.pattern.colors.push_back(rgb_from_json(c, "pattern.colors[]"));
        }
    }

    if (j.contains("camera")) {
        const auto& c = j.at("camera");
        cfg.camera.fps = get_number(c, "fps", cfg.camera.fps);
        cfg.camera.exposure_fraction = get_number(c, "exposure_fraction", cfg.camera.exposure_fraction);
        cfg.camera.iso_gain = get_number(c, "iso_gain", cfg.camera.iso_gain);
        cfg.camera.noise_sigma = get_number(c, "noise_sigma", cfg.camera.noise_sigma);
    }

    cfg.duration_s = get_number(j, "duration_s", cfg.duration_s);
    if (!(cfg.duration_s > 0.0)) throw InvalidArgument("duration_s must be > 0");

    cfg.scene.validate();
    cfg.pattern.validate();
    cfg.camera.validate();
    return cfg;
}

nlohmann::json sim_config_to_json(const SimConfig& cfg) {
    nlohmann::json colors = nlohmann::json::array();
    for (const Rgb& c : cfg.pattern.colors) colors.push_back({c.r, c.g, c.b});
    return {{"scene",
             {{"width", cfg.scene.width},
              {"height", cfg.scene.height},
              {"ambient_lux", cfg.scene.ambient_lux},
              {"car_albedo", cfg.scene.car_albedo},
              {"car_box",
               {cfg.scene.car_box.x_min, cfg.scene.car_box.y_min, cfg.scene.car_box.x_max, cfg.scene.car_box.y_max}},
              {"flasher_position", {cfg.scene.flasher_x, cfg.scene.flasher_y}},
              {"flasher_radius", cfg.scene.flasher_radius},
              {"distance_scale", cfg.scene.distance_scale}}},
            {"pattern",
             {{"mode", mode_to_string(cfg.pattern.mode)},
              {"frequency_hz", cfg.pattern.frequency_hz},
              {"duty_cycle", cfg.pattern.duty_cycle},
              {"intensity", cfg.pattern.intensity},
              {"colors", colors}}},
            {"camera",
             {{"fps", cfg.camera.fps},
              {"exposure_fraction", cfg.camera.exposure_fraction},
              {"iso_gain", cfg.camera.iso_gain},
              {"noise_sigma", cfg.camera.noise_sigma}}},
            {"duration_s", cfg.duration_s}};
}

AugmentationConfig augmentation_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("augmentation config must be a JSON object");
    AugmentationConfig cfg;
    cfg.night_brightness_threshold = get_number(j, "night_brightness_threshold", cfg.night_brightness_threshold);
    if (j.contains("flare_colors")) {
        cfg.flare_colors.clear();
        for (const auto& c : j.at("flare_colors")) cfg.flare_colors.push_back(rgb_from_json(c, "flare_colors[]"));
    }
    if (j.contains("flare_radius_range")) {
        const auto& r = j.at("flare_radius_range");
        if (!r.is_array() || r.size() != 2) throw InvalidArgument("flare_radius_range must be [min, max]");
        cfg.flare_radius_min = r[0].get<int>();
        cfg.flare_radius_max = r[1].get<int>();
    }
    cfg.flare_peak_intensity = get_number(j, "flare_peak_intensity", cfg.flare_peak_intensity);
    if (j.contains("streak_enabled")) cfg.streak_enabled = j.at("streak_enabled").get<bool>();
    if (j.contains("rng_seed")) cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

BackendConfig backend_config_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("backend config requires a 'kind' field");
    BackendConfig cfg;
    cfg.raw = j;
    cfg.kind = j.at("kind").get<std::string>();
    if (cfg.kind != "reference" && cfg.kind != "worker")
        throw InvalidArgument("backend kind must be 'reference' or 'worker' (got '" + cfg.kind + "')");
    if (cfg.kind == "worker" && (!j.contains("cmd") || !j.at("cmd").is_array() || j.at("cmd").empty()))
        throw InvalidArgument("worker backend requires a non-empty 'cmd' array");
    return cfg;
}

std::shared_ptr<DetectorBackend> make_backend(const BackendConfig& cfg,
                                              std::optional<BoundingBox> default_car_box) {
    if (cfg.kind == "worker") {
        std::vector<std::string> cmd;
        for (const auto& part : cfg.raw.at("cmd")) cmd.push_back(part.get<std::string>());
        std::optional<int> timeout;
        if (cfg.raw.contains("timeout_ms")) timeout = cfg.raw.at("timeout_ms").get<int>();
        return std::make_shared<WorkerClient>(std::move(cmd), timeout);
    }

    ReferenceDetectorConfig ref;
    if (cfg.raw.contains("config")) {
        const auto& c = cfg.raw.at("config");
        ref.c_clear = get_number(c, "c_clear", ref.c_clear);
        ref.gamma = get_number(c, "gamma", ref.gamma);
        ref.saturation_level = static_cast<int>(get_number(c, "saturation_level", ref.saturation_level));
        ref.dilation = static_cast<int>(get_number(c, "dilation", ref.dilation));
    }
    std::optional<BoundingBox> car_box = default_car_box;
    if (cfg.raw.contains("car_box")) car_box = box_from_json(cfg.raw.at("car_box"), "backend.car_box");
    if (!car_box)
        throw InvalidArgument("reference backend requires car_box (none given and no sim_config.json found)");
    return std::make_shared<ReferenceDetector>(ref, *car_box);
}

PipelineConfigJson pipeline_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("pipeline config must be a JSON object");
    for (const char* key : {"raw_detector", "tuned_detector"})
        if (!j.contains(key)) throw InvalidArgument(std::string("pipeline config missing '") + key + "'");

    PipelineConfigJson cfg;
    cfg.denoiser = j.value("denoiser", nlohmann::json{{"kind", "identity"}});
    if (!cfg.denoiser.contains("kind")) throw InvalidArgument("denoiser requires a 'kind' field");
    const std::string kind = cfg.denoiser.at("kind").get<std::string>();
    if (kind != "identity" && kind != "chroma_clamp" && kind != "worker")
        throw InvalidArgument("denoiser kind must be 'identity', 'chroma_clamp' or 'worker' (got '" + kind + "')");
    if (kind == "worker" && (!cfg.denoiser.contains("cmd") || !cfg.denoiser.at("cmd").is_array()))
        throw InvalidArgument("worker denoiser requires a 'cmd' array");

    cfg.raw_detector = backend_config_from_json(j.at("raw_detector"));
    cfg.tuned_detector = backend_config_from_json(j.at("tuned_detector"));
    if (j.contains("combiner")) {
        const auto& c = j.at("combiner");
        cfg.combiner.iou_threshold = get_number(c, "iou_threshold", cfg.combiner.iou_threshold);
        if (c.contains("class_match")) cfg.combiner.class_match_required = c.at("class_match").get<bool>();
    }
    cfg.combiner.validate();
    return cfg;
}

namespace {

/// Denoiser adapter owning a worker client used in denoise mode.
class WorkerDenoiser final : public Denoiser {
public:
    WorkerDenoiser(std::vector<std::string> cmd, std::optional<int> timeout_ms)
        : client_(std::move(cmd), timeout_ms) {}
    std::string name() const override { return "worker"; }
    Frame denoise(const Frame& frame) override { return client_.denoise(frame); }

private:
    WorkerClient client_;
};

}  // namespace

std::unique_ptr<Pipeline> make_pipeline(const PipelineConfigJson& cfg,
                                        std::optional<BoundingBox> default_car_box) {
    std::unique_ptr<Denoiser> denoiser;
    const std::string kind = cfg.denoiser.at("kind").get<std::string>();
    if (kind == "identity") {
        denoiser = std::make_unique<IdentityDenoiser>();
    } else if (kind == "chroma_clamp") {
        ChromaClampConfig clamp;
        clamp.excess_threshold = static_cast<int>(get_number(cfg.denoiser, "excess_threshold", clamp.excess_threshold));
        clamp.luma_floor = static_cast<int>(get_number(cfg.denoiser, "luma_floor", clamp.luma_floor));
        denoiser = std::make_unique<ChromaClampDenoiser>(clamp);
    } else {
        std::vector<std::string> cmd;
        for (const auto& part : cfg.denoiser.at("cmd")) cmd.push_back(part.get<std::string>());
        std::optional<int> timeout;
        if (cfg.denoiser.contains("timeout_ms")) timeout = cfg.denoiser.at("timeout_ms").get<int>();
        denoiser = std::make_unique<WorkerDenoiser>(std::move(cmd), timeout);
    }

    return std::make_unique<Pipeline>(std::move(denoiser), make_backend(cfg.raw_detector, default_car_box),
                                      make_backend(cfg.tuned_detector, default_car_box), cfg.combiner);
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("invalid JSON in " + path.string() + ": " + e.what());
    }
}

std::optional<BoundingBox> car_box_from_sim_dir(const std::filesystem::path& video_dir) {
    const auto path = video_dir / "sim_config.json";
    if (!std::filesystem::exists(path)) return std::nullopt;
    const SimConfig cfg = sim_config_from_json(load_json_file(path));
    // Reproduce the distance scaling applied at render time.
    const double s = cfg.scene.distance_scale;
    const double cx = (cfg.scene.car_box.x_min + cfg.scene.car_box.x_max) / 2.0;
    const double cy = (cfg.scene.car_box.y_min + cfg.scene.car_box.y_max) / 2.0;
    return BoundingBox{cx + s * (cfg.scene.car_box.x_min - cx), cy + s * (cfg.scene.car_box.y_min - cy),
                       cx + s * (cfg.scene.car_box.x_max - cx), cy + s * (cfg.scene.car_box.y_max - cy)};
}

}  // namespace flarebench
