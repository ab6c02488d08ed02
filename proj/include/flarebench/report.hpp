#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "flarebench/bench.hpp"
#include "flarebench/signal_analysis.hpp"
#include "flarebench/types.hpp"

namespace flarebench {

inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
    std::string input;
    std::string backend;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;

    bool operator==(const Provenance&) const = default;
};

struct AnalysisReport {
    SignalMetrics metrics;
    std::optional<SpectrumPeak> dominant_peak;
    DetectionLossCurve loss_curve;
    double histogram_shift_l1 = 0.0;
    Provenance provenance;

    bool operator==(const AnalysisReport&) const = default;
};

nlohmann::json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);  // throws InvalidArgument on schema mismatch

void write_report(const std::filesystem::path& path, const AnalysisReport& report);
AnalysisReport read_report(const std::filesystem::path& path);

void write_signal_csv(const std::filesystem::path& path, const ConfidenceSignal& signal);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
void write_loss_csv(const std::filesystem::path& path, const DetectionLossCurve& curve);

struct ComparisonRow {
    std::string metric;
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;            // b - a
    std::optional<double> pct;     // delta / a * 100, absent when a == 0
};

struct Comparison {
    std::vector<ComparisonRow> rows;
};

/// Side-by-side metric deltas of two reports, improvement as delta/baseline.
Comparison compare_reports(const AnalysisReport& a, const AnalysisReport& b);

nlohmann::json comparison_to_json(const Comparison& cmp);
std::string comparison_to_text(const Comparison& cmp);

nlohmann::json latency_report_to_json(const LatencyReport& report);

}  // namespace flarebench
