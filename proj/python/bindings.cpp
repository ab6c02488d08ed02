// Python bindings for the flarebench core. Frames cross the boundary as
// HxWx3 uint8 numpy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flarebench/augment.hpp"
#include "flarebench/bench.hpp"
#include "flarebench/detector.hpp"
#include "flarebench/pipeline.hpp"
#include "flarebench/signal_analysis.hpp"
#include "flarebench/sim.hpp"
#include "flarebench/types.hpp"

namespace py = pybind11;
using namespace flarebench;

namespace {

Frame frame_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array) {
    if (array.ndim() != 3 || array.shape(2) != 3)
        throw py::value_error("frame array must have shape (height, width, 3)");
    const int height = static_cast<int>(array.shape(0));
    const int width = static_cast<int>(array.shape(1));
    std::vector<std::uint8_t> pixels(array.data(), array.data() + array.size());
    return Frame(width, height, std::move(pixels));
}

py::array_t<std::uint8_t> frame_to_array(const Frame& frame) {
    py::array_t<std::uint8_t> array({frame.height(), frame.width(), 3});
    std::copy(frame.pixels().begin(), frame.pixels().end(), array.mutable_data());
    return array;
}

BoundingBox box_from_tuple(const std::array<double, 4>& b) { return {b[0], b[1], b[2], b[3]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "flarebench: emergency-flasher robustness analysis for object detectors";

    py::class_<BoundingBox>(m, "BoundingBox")
        .def(py::init<double, double, double, double>(), py::arg("x_min"), py::arg("y_min"), py::arg("x_max"),
             py::arg("y_max"))
        .def_readwrite("x_min", &BoundingBox::x_min)
        .def_readwrite("y_min", &BoundingBox::y_min)
        .def_readwrite("x_max", &BoundingBox::x_max)
        .def_readwrite("y_max", &BoundingBox::y_max)
        .def("area", &BoundingBox::area)
        .def("__repr__", [](const BoundingBox& b) {
            return "BoundingBox(" + std::to_string(b.x_min) + ", " + std::to_string(b.y_min) + ", " +
                   std::to_string(b.x_max) + ", " + std::to_string(b.y_max) + ")";
        });

    py::class_<Detection>(m, "Detection")
        .def(py::init([](const std::array<double, 4>& box, const std::string& cls, double conf) {
                 return Detection{box_from_tuple(box), cls, conf};
             }),
             py::arg("box"), py::arg("class_label") = "car", py::arg("confidence") = 0.0)
        .def_readwrite("box", &Detection::box)
        .def_readwrite("class_label", &Detection::class_label)
        .def_readwrite("confidence", &Detection::confidence);

    m.def("iou", [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return iou(box_from_tuple(a), box_from_tuple(b));
    }, py::arg("a"), py::arg("b"), "Intersection-over-union of two boxes given as (x_min, y_min, x_max, y_max).");

    m.def("mean_brightness",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array) {
              return mean_brightness(frame_from_array(array));
          },
          py::arg("frame"));

    m.def("classify_day_night",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array, double threshold) {
              AugmentationConfig cfg;
              cfg.night_brightness_threshold = threshold;
              return classify_day_night(frame_from_array(array), cfg) == DayNight::Day ? "day" : "night";
          },
          py::arg("frame"), py::arg("threshold") = 60.0);

    m.def("augment_flare",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array,
             std::uint64_t seed, std::uint64_t stream_key, int radius_min, int radius_max, bool streak) {
              AugmentationConfig cfg;
              cfg.rng_seed = seed;
              cfg.flare_radius_min = radius_min;
              cfg.flare_radius_max = radius_max;
              cfg.streak_enabled = streak;
              const auto [frame, placement] = augment_flare(frame_from_array(array), cfg, stream_key);
              py::dict info;
              info["cx"] = placement.cx;
              info["cy"] = placement.cy;
              info["radius"] = placement.radius;
              info["color"] = py::make_tuple(placement.color.r, placement.color.g, placement.color.b);
              info["seed"] = placement.seed_used;
              return py::make_tuple(frame_to_array(frame), info);
          },
          py::arg("frame"), py::arg("seed") = 0, py::arg("stream_key") = 0, py::arg("radius_min") = 12,
          py::arg("radius_max") = 48, py::arg("streak") = true);

    m.def("chroma_clamp_denoise",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array,
             int excess_threshold, int luma_floor) {
              return frame_to_array(
                  chroma_clamp_denoise(frame_from_array(array), {excess_threshold, luma_floor}));
          },
          py::arg("frame"), py::arg("excess_threshold") = 80, py::arg("luma_floor") = 180);

    m.def("simulate",
          [](double frequency_hz, double duration_s, double fps, double duty_cycle, double intensity,
             double exposure_fraction, double noise_sigma, std::uint64_t seed, bool flasher_off) {
              SceneConfig scene;
              scene.width = 160;
              scene.height = 120;
              scene.car_box = {40, 50, 120, 100};
              scene.flasher_x = 80;
              scene.flasher_y = 52;
              scene.flasher_radius = 45;
              FlasherPattern pattern;
              pattern.mode = flasher_off ? FlasherMode::SteadyOff : FlasherMode::SingleColor;
              pattern.frequency_hz = frequency_hz;
              pattern.duty_cycle = duty_cycle;
              pattern.intensity = intensity;
              pattern.colors = {{40, 40, 255}};
              CameraModel cam;
              cam.fps = fps;
              cam.exposure_fraction = exposure_fraction;
              cam.noise_sigma = noise_sigma;

              const auto [seq, truth] = render_sequence(scene, pattern, cam, duration_s, seed);
              py::list frames;
              py::list intensities;
              for (const auto& frame : seq.frames) frames.append(frame_to_array(frame));
              for (const auto& gt : truth.frames) intensities.append(gt.intensity);
              py::dict out;
              out["frames"] = frames;
              out["intensity"] = intensities;
              out["car_box"] = py::make_tuple(truth.car_box.x_min, truth.car_box.y_min, truth.car_box.x_max,
                                              truth.car_box.y_max);
              out["fps"] = seq.fps;
              return out;
          },
          py::arg("frequency_hz") = 1.3, py::arg("duration_s") = 10.0, py::arg("fps") = 24.0,
          py::arg("duty_cycle") = 0.5, py::arg("intensity") = 1.0, py::arg("exposure_fraction") = 0.5,
          py::arg("noise_sigma") = 0.0, py::arg("seed") = 0, py::arg("flasher_off") = false,
          "Render a canned flasher scene; returns frames, ground-truth intensity and the car box.");

    m.def("reference_detect",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& array,
             const std::array<double, 4>& car_box) {
              ReferenceDetector detector({}, box_from_tuple(car_box));
              const auto dets = detector.detect(frame_from_array(array));
              return dets.front().confidence;
          },
          py::arg("frame"), py::arg("car_box"),
          "Confidence of the deterministic reference detector for the given target box.");

    m.def("compute_metrics", [](const std::vector<double>& values, double fps) {
        ConfidenceSignal s;
        s.values = values;
        s.fps = fps;
        const auto metrics = compute_metrics(s);
        py::dict out;
        out["average"] = metrics.average;
        out["minimum"] = metrics.minimum;
        out["maximum"] = metrics.maximum;
        out["range"] = metrics.range;
        out["above_0.5"] = metrics.fraction_above[0];
        out["above_0.6"] = metrics.fraction_above[1];
        out["above_0.7"] = metrics.fraction_above[2];
        out["above_0.8"] = metrics.fraction_above[3];
        return out;
    }, py::arg("values"), py::arg("fps") = 24.0);

    m.def("spectrum", [](const std::vector<double>& values, double fps) {
        ConfidenceSignal s;
        s.values = values;
        s.fps = fps;
        const auto spec = spectrum(s);
        py::dict out;
        out["frequencies"] = spec.frequencies;
        out["magnitudes"] = spec.magnitudes;
        if (spec.dominant) {
            py::dict peak;
            peak["frequency_hz"] = spec.dominant->frequency_hz;
            peak["magnitude"] = spec.dominant->magnitude;
            peak["resolution_hz"] = spec.dominant->resolution_hz;
            out["dominant"] = peak;
        } else {
            out["dominant"] = py::none();
        }
        return out;
    }, py::arg("values"), py::arg("fps") = 24.0);

    m.def("detection_loss", [](const std::vector<double>& values) {
        ConfidenceSignal s;
        s.values = values;
        s.fps = 24.0;
        const auto curve = detection_loss(s);
        return py::make_tuple(curve.thresholds, curve.fraction_detected);
    }, py::arg("values"));

    m.def("combine",
          [](const std::vector<Detection>& raw, const std::vector<Detection>& tuned, double iou_threshold,
             bool class_match) {
              CombinerConfig cfg;
              cfg.iou_threshold = iou_threshold;
              cfg.class_match_required = class_match;
              return combine(raw, tuned, cfg);
          },
          py::arg("raw"), py::arg("tuned"), py::arg("iou_threshold") = 0.5, py::arg("class_match") = true);

    m.def("fps_from_mean_ms", &fps_from_mean_ms, py::arg("mean_total_ms"));
    m.def("overhead_percent", &overhead_percent, py::arg("total_ms"), py::arg("baseline_ms"));
    m.def("improvement_percent", &improvement_percent, py::arg("baseline"), py::arg("value"));

    m.attr("__version__") = "0.1.0";
}
