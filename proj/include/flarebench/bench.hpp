#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flarebench/pipeline.hpp"
#include "flarebench/types.hpp"

namespace flarebench {

struct LatencySummary {
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
};

LatencySummary summarize_latencies(std::vector<double> samples_ms);

struct LatencyReport {
    std::vector<std::pair<std::string, LatencySummary>> stages;
    LatencySummary total;
    double fps = 0.0;  // 1000 / total.mean_ms
    std::string baseline_name;
    double baseline_mean_ms = 0.0;
    double overhead_pct = 0.0;  // (total - baseline) / baseline * 100
};

inline double fps_from_mean_ms(double mean_total_ms) { return 1000.0 / mean_total_ms; }

inline double overhead_percent(double total_ms, double baseline_ms) {
    return (total_ms - baseline_ms) / baseline_ms * 100.0;
}

/// Improvement of `value` over `baseline` as a percentage of the baseline.
inline double improvement_percent(double baseline, double value) {
    return (value - baseline) / baseline * 100.0;
}

/// Builds a report from known per-stage means under a sequential-stage model
/// (total = sum of stages). Used to check reporting arithmetic against
/// published latency tables without running anything.
LatencyReport report_from_stage_means(const std::vector<std::pair<std::string, double>>& stage_means,
                                      const std::string& baseline_name, double baseline_mean_ms);

/// Runs every frame `repetitions` times through the pipeline and aggregates
/// wall-clock stage timings. The overhead baseline is the raw-detector stage
/// of the same run.
LatencyReport benchmark(Pipeline& pipeline, const std::vector<Frame>& frames, int repetitions);

}  // namespace flarebench
