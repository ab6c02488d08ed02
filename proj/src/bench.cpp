#include "flarebench/bench.hpp"

#include <algorithm>
#include <cmath>

namespace flarebench {

LatencySummary summarize_latencies(std::vector<double> samples_ms) {
    if (samples_ms.empty()) throw EmptyInput("no latency samples");
    std::sort(samples_ms.begin(), samples_ms.end());
    double sum = 0.0;
    for (double v : samples_ms) sum += v;

    // Nearest-rank percentiles.
    auto rank = [&](double p) {
        const auto idx = static_cast<std::size_t>(
            std::ceil(p / 100.0 * static_cast<double>(samples_ms.size())));
        return samples_ms[idx == 0 ? 0 : idx - 1];
    };
    return {sum / static_cast<double>(samples_ms.size()), rank(50.0), rank(95.0)};
}

LatencyReport report_from_stage_means(const std::vector<std::pair<std::string, double>>& stage_means,
                                      const std::string& baseline_name, double baseline_mean_ms) {
    if (stage_means.empty()) throw EmptyInput("no stages given");
    if (!(baseline_mean_ms > 0.0)) throw InvalidArgument("baseline mean must be > 0");

    LatencyReport report;
    double total = 0.0;
    for (const auto& [name, mean] : stage_means) {
        report.stages.push_back({name, {mean, mean, mean}});
        total += mean;
    }
    report.total = {total, total, total};
    report.fps = fps_from_mean_ms(total);
    report.baseline_name = baseline_name;
    report.baseline_mean_ms = baseline_mean_ms;
    report.overhead_pct = overhead_percent(total, baseline_mean_ms);
    return report;
}

LatencyReport benchmark(Pipeline& pipeline, const std::vector<Frame>& frames, int repetitions) {
    if (frames.empty()) throw EmptyInput("benchmark requires at least one frame");
    if (repetitions < 1) throw EmptyInput("benchmark requires repetitions >= 1");

    std::vector<double> denoise, tuned, raw, combine_ms, total;
    const std::size_t n = frames.size() * static_cast<std::size_t>(repetitions);
    denoise.reserve(n);
    tuned.reserve(n);
    raw.reserve(n);
    combine_ms.reserve(n);
    total.reserve(n);

    for (int rep = 0; rep < repetitions; ++rep) {
        for (const Frame& frame : frames) {
            const PipelineResult result = pipeline.run(frame);
            denoise.push_back(result.timings.denoise_ms);
            tuned.push_back(result.timings.tuned_detect_ms);
            raw.push_back(result.timings.raw_detect_ms);
            combine_ms.push_back(result.timings.combine_ms);
            total.push_back(result.timings.total_ms);
        }
    }

    LatencyReport report;
    report.stages.push_back({"denoise", summarize_latencies(denoise)});
    report.stages.push_back({"tuned_detect", summarize_latencies(tuned)});
    report.stages.push_back({"raw_detect", summarize_latencies(raw)});
    report.stages.push_back({"combine", summarize_latencies(combine_ms)});
    report.total = summarize_latencies(total);
    report.fps = fps_from_mean_ms(report.total.mean_ms);
    report.baseline_name = "raw_detector";
    report.baseline_mean_ms = report.stages[2].second.mean_ms;
    report.overhead_pct = overhead_percent(report.total.mean_ms, report.baseline_mean_ms);
    return report;
}

}  // namespace flarebench
