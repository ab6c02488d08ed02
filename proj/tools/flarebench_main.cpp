// flarebench CLI: simulate flasher videos, augment datasets, analyze
// confidence signals, compare reports, and benchmark the dual-path pipeline.
//
// Exit codes: 0 success, 2 config/validation, 3 IO, 4 analysis, 5 backend.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flarebench/bench.hpp"
#include "flarebench/config.hpp"
#include "flarebench/ppm.hpp"
#include "flarebench/report.hpp"
#include "flarebench/signal_analysis.hpp"

using namespace flarebench;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitAnalysis = 4;
constexpr int kExitBackend = 5;

struct CliError {
    int code;
    std::string message;
};

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

void cmd_simulate(const fs::path& config_path, const fs::path& out_dir, std::uint64_t seed, bool verbose) {
    const SimConfig cfg = sim_config_from_json(load_json_file(config_path));
    const auto [seq, truth] = render_sequence(cfg.scene, cfg.pattern, cfg.camera, cfg.duration_s, seed);
    save_sequence(out_dir, seq);

    nlohmann::json gt = nlohmann::json::array();
    for (const auto& frame : truth.frames)
        gt.push_back({{"index", frame.index},
                      {"intensity", frame.intensity},
                      {"color", {frame.color.r, frame.color.g, frame.color.b}}});
    open_out(out_dir / "ground_truth.json") << gt.dump(2) << "\n";
    open_out(out_dir / "sim_config.json") << sim_config_to_json(cfg).dump(2) << "\n";
    if (verbose)
        std::cerr << "wrote " << seq.frames.size() << " frames at " << seq.fps << " fps to " << out_dir << "\n";
}

void cmd_augment(const fs::path& in_dir, const fs::path& out_dir, const fs::path& config_path,
                 std::optional<std::uint64_t> seed, bool verbose) {
    AugmentationConfig cfg;
    if (!config_path.empty()) cfg = augmentation_config_from_json(load_json_file(config_path));
    if (seed) cfg.rng_seed = *seed;
    const DatasetSummary summary = build_augmented_dataset(in_dir, out_dir, cfg);
    nlohmann::json out = {{"day", summary.day},
                          {"night", summary.night},
                          {"augmented", summary.augmented},
                          {"skipped", summary.skipped}};
    std::cout << out.dump(2) << "\n";
    if (verbose) std::cerr << "augmented dataset written to " << out_dir << "\n";
}

void cmd_analyze(const fs::path& video_dir, const fs::path& backend_path, const fs::path& out_dir,
                 const std::vector<double>& roi_vals, const std::string& target_class, std::uint64_t seed,
                 bool verbose) {
    const VideoSequence seq = load_sequence(video_dir);
    const auto sim_box = car_box_from_sim_dir(video_dir);
    const BackendConfig backend_cfg = backend_config_from_json(load_json_file(backend_path));
    const auto backend = make_backend(backend_cfg, sim_box);

    std::optional<BoundingBox> roi;
    if (roi_vals.size() == 4) {
        roi = BoundingBox{roi_vals[0], roi_vals[1], roi_vals[2], roi_vals[3]};
        if (!roi->valid()) throw InvalidArgument("--roi must satisfy x_min < x_max and y_min < y_max");
    }

    std::vector<std::vector<Detection>> per_frame;
    per_frame.reserve(seq.frames.size());
    for (const Frame& frame : seq.frames) per_frame.push_back(backend->detect(frame));

    const ConfidenceSignal signal = extract_signal(per_frame, target_class, seq.fps, roi);
    const SignalMetrics metrics = compute_metrics(signal);
    const Spectrum spec = spectrum(signal);
    const DetectionLossCurve curve = detection_loss(signal);

    // Tonal shift between the best and worst frames, over the analysis region.
    BoundingBox hist_box{0, 0, static_cast<double>(seq.width()), static_cast<double>(seq.height())};
    if (roi)
        hist_box = *roi;
    else if (sim_box)
        hist_box = *sim_box;
    std::size_t best = 0, worst = 0;
    for (std::size_t i = 1; i < signal.values.size(); ++i) {
        if (signal.values[i] > signal.values[best]) best = i;
        if (signal.values[i] < signal.values[worst]) worst = i;
    }
    const double shift =
        tonal_shift_l1(tonal_histogram(seq.frames[best], hist_box), tonal_histogram(seq.frames[worst], hist_box));

    AnalysisReport report;
    report.metrics = metrics;
    report.dominant_peak = spec.dominant;
    report.loss_curve = curve;
    report.histogram_shift_l1 = shift;
    report.provenance = {video_dir.string(), backend->capabilities().name, seed, kToolVersion};

    fs::create_directories(out_dir);
    write_report(out_dir / "report.json", report);
    write_signal_csv(out_dir / "signal.csv", signal);
    write_spectrum_csv(out_dir / "spectrum.csv", spec);
    write_loss_csv(out_dir / "loss_curve.csv", curve);
    if (verbose) {
        std::cerr << "average " << metrics.average << ", range " << metrics.range;
        if (spec.dominant)
            std::cerr << ", dominant peak " << spec.dominant->frequency_hz << " Hz";
        else
            std::cerr << ", no spectral peak";
        std::cerr << "\n";
    }
}

void cmd_compare(const fs::path& a_path, const fs::path& b_path, const fs::path& out_path) {
    const AnalysisReport a = read_report(a_path);
    const AnalysisReport b = read_report(b_path);
    const Comparison cmp = compare_reports(a, b);
    std::cout << comparison_to_text(cmp);
    if (!out_path.empty()) open_out(out_path) << comparison_to_json(cmp).dump(2) << "\n";
}

std::vector<Frame> load_frames(const fs::path& video_dir) {
    const VideoSequence seq = load_sequence(video_dir);
    return seq.frames;
}

void cmd_bench(const fs::path& pipeline_path, const fs::path& video_dir, int repetitions,
               const fs::path& out_path) {
    if (repetitions < 1) throw InvalidArgument("--repetitions must be >= 1");
    const auto pipeline_cfg = pipeline_config_from_json(load_json_file(pipeline_path));
    const auto pipeline = make_pipeline(pipeline_cfg, car_box_from_sim_dir(video_dir));
    const auto frames = load_frames(video_dir);
    const LatencyReport report = benchmark(*pipeline, frames, repetitions);
    const nlohmann::json j = latency_report_to_json(report);
    std::cout << j.dump(2) << "\n";
    if (!out_path.empty()) open_out(out_path) << j.dump(2) << "\n";
}

void cmd_pipeline_run(const fs::path& pipeline_path, const fs::path& video_dir, const fs::path& out_dir) {
    const auto pipeline_cfg = pipeline_config_from_json(load_json_file(pipeline_path));
    const auto pipeline = make_pipeline(pipeline_cfg, car_box_from_sim_dir(video_dir));
    const VideoSequence seq = load_sequence(video_dir);

    nlohmann::json frames = nlohmann::json::array();
    for (const Frame& frame : seq.frames) {
        const PipelineResult result = pipeline->run(frame);
        nlohmann::json dets = nlohmann::json::array();
        for (const Detection& d : result.detections)
            dets.push_back({{"x_min", d.box.x_min},
                            {"y_min", d.box.y_min},
                            {"x_max", d.box.x_max},
                            {"y_max", d.box.y_max},
                            {"class", d.class_label},
                            {"confidence", d.confidence}});
        frames.push_back({{"index", frame.index()},
                          {"detections", dets},
                          {"timings",
                           {{"denoise_ms", result.timings.denoise_ms},
                            {"tuned_detect_ms", result.timings.tuned_detect_ms},
                            {"raw_detect_ms", result.timings.raw_detect_ms},
                            {"combine_ms", result.timings.combine_ms},
                            {"total_ms", result.timings.total_ms}}}});
    }
    fs::create_directories(out_dir);
    open_out(out_dir / "detections.json") << frames.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flarebench: emergency-flasher robustness analysis for object detectors"};
    app.require_subcommand(1);
    app.fallthrough();  // global --seed/--verbose may follow the subcommand

    std::uint64_t seed = 0;
    bool seed_given = false;
    bool verbose = false;
    app.add_flag("--verbose", verbose, "chatty progress on stderr");
    auto* seed_opt = app.add_option("--seed", seed, "root seed fanned out per stage");

    std::string config_path, out_path, video_dir, backend_path, in_dir;
    std::string report_a, report_b;
    std::string pipeline_path;
    std::string target_class = "car";
    std::vector<double> roi_vals;
    int repetitions = 1;

    auto* sim = app.add_subcommand("simulate", "render a synthetic flasher video");
    sim->add_option("--config", config_path, "sim config JSON")->required();
    sim->add_option("--out", out_path, "output sequence directory")->required();

    auto* aug = app.add_subcommand("augment", "flare-augment the nighttime part of a PPM dataset");
    aug->add_option("--in", in_dir, "input image directory")->required();
    aug->add_option("--out", out_path, "output dataset directory")->required();
    aug->add_option("--config", config_path, "augmentation config JSON");

    auto* ana = app.add_subcommand("analyze", "extract and analyze a confidence signal");
    ana->add_option("--video", video_dir, "video sequence directory")->required();
    ana->add_option("--backend", backend_path, "backend config JSON")->required();
    ana->add_option("--out", out_path, "report output directory")->required();
    ana->add_option("--roi", roi_vals, "seed box x_min,y_min,x_max,y_max")->delimiter(',')->expected(4);
    ana->add_option("--class", target_class, "target class (default car)");

    auto* cmp = app.add_subcommand("compare", "diff two analysis reports");
    cmp->add_option("--a", report_a, "baseline report.json")->required();
    cmp->add_option("--b", report_b, "candidate report.json")->required();
    cmp->add_option("--out", out_path, "optional JSON output path");

    auto* bench_cmd = app.add_subcommand("bench", "latency-benchmark a pipeline over a video");
    bench_cmd->add_option("--pipeline", pipeline_path, "pipeline config JSON")->required();
    bench_cmd->add_option("--video", video_dir, "video sequence directory")->required();
    bench_cmd->add_option("--repetitions", repetitions, "passes over the frames (default 1)");
    bench_cmd->add_option("--out", out_path, "optional JSON output path");

    auto* run = app.add_subcommand("pipeline-run", "run the dual-path pipeline over a video");
    run->add_option("--pipeline", pipeline_path, "pipeline config JSON")->required();
    run->add_option("--video", video_dir, "video sequence directory")->required();
    run->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    seed_given = seed_opt->count() > 0;
    (void)seed_given;

    try {
        if (sim->parsed()) {
            cmd_simulate(config_path, out_path, seed, verbose);
        } else if (aug->parsed()) {
            cmd_augment(in_dir, out_path, config_path,
                        seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt, verbose);
        } else if (ana->parsed()) {
            cmd_analyze(video_dir, backend_path, out_path, roi_vals, target_class, seed, verbose);
        } else if (cmp->parsed()) {
            cmd_compare(report_a, report_b, out_path);
        } else if (bench_cmd->parsed()) {
            cmd_bench(pipeline_path, video_dir, repetitions, out_path);
        } else if (run->parsed()) {
            cmd_pipeline_run(pipeline_path, video_dir, out_path);
        }
    } catch (const ProtocolError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const WorkerTimeout& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const WorkerCrashed& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const NoTarget& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const EmptySignal& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const InsufficientSamples& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const InvalidRegion& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        // InvalidArgument, InvalidScene, DegenerateInput, EmptyDataset, EmptyInput.
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
