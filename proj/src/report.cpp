#include "flarebench/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flarebench {

namespace {

const std::array<const char*, 4> kAboveKeys{"above_0.5", "above_0.6", "above_0.7", "above_0.8"};

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("report schema mismatch: " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

// Shortest round-trip formatting for CSV cells.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json report_to_json(const AnalysisReport& report) {
    nlohmann::json metrics = {
        {"average", report.metrics.average},
        {"minimum", report.metrics.minimum},
        {"maximum", report.metrics.maximum},
        {"range", report.metrics.range},
    };
    for (std::size_t i = 0; i < kAboveKeys.size(); ++i) metrics[kAboveKeys[i]] = report.metrics.fraction_above[i];

    nlohmann::json peak;
    if (report.dominant_peak)
        peak = {{"frequency_hz", report.dominant_peak->frequency_hz},
                {"magnitude", report.dominant_peak->magnitude},
                {"resolution_hz", report.dominant_peak->resolution_hz}};

    return {{"metrics", metrics},
            {"dominant_peak", peak},
            {"loss_curve", {{"thresholds", report.loss_curve.thresholds},
                            {"fraction_detected", report.loss_curve.fraction_detected}}},
            {"histogram_shift_l1", report.histogram_shift_l1},
            {"provenance",
             {{"input", report.provenance.input},
              {"backend", report.provenance.backend},
              {"seed", report.provenance.seed},
              {"tool_version", report.provenance.tool_version}}}};
}

AnalysisReport report_from_json(const nlohmann::json& j) {
    require(j.is_object(), "top level must be an object");
    for (const char* key : {"metrics", "dominant_peak", "loss_curve", "histogram_shift_l1", "provenance"})
        require(j.contains(key), std::string("missing key '") + key + "'");

    AnalysisReport report;
    const auto& metrics = j.at("metrics");
    for (const char* key : {"average", "minimum", "maximum", "range"})
        require(metrics.contains(key), std::string("metrics missing '") + key + "'");
    report.metrics.average = metrics.at("average").get<double>();
    report.metrics.minimum = metrics.at("minimum").get<double>();
    report.metrics.maximum = metrics.at("maximum").get<double>();
    report.metrics.range = metrics.at("range").get<double>();
    for (std::size_t i = 0; i < kAboveKeys.size(); ++i) {
        require(metrics.contains(kAboveKeys[i]), std::string("metrics missing '") + kAboveKeys[i] + "'");
        report.metrics.fraction_above[i] = metrics.at(kAboveKeys[i]).get<double>();
    }

    const auto& peak = j.at("dominant_peak");
    if (!peak.is_null())
        report.dominant_peak = SpectrumPeak{peak.at("frequency_hz").get<double>(),
                                            peak.at("magnitude").get<double>(),
                                            peak.at("resolution_hz").get<double>()};

    const auto& curve = j.at("loss_curve");
    require(curve.contains("thresholds") && curve.contains("fraction_detected"), "loss_curve incomplete");
    report.loss_curve.thresholds = curve.at("thresholds").get<std::vector<double>>();
    report.loss_curve.fraction_detected = curve.at("fraction_detected").get<std::vector<double>>();
    require(report.loss_curve.thresholds.size() == report.loss_curve.fraction_detected.size(),
            "loss_curve arrays must have equal length");

    report.histogram_shift_l1 = j.at("histogram_shift_l1").get<double>();

    const auto& prov = j.at("provenance");
    for (const char* key : {"input", "backend", "seed", "tool_version"})
        require(prov.contains(key), std::string("provenance missing '") + key + "'");
    report.provenance.input = prov.at("input").get<std::string>();
    report.provenance.backend = prov.at("backend").get<std::string>();
    report.provenance.seed = prov.at("seed").get<std::uint64_t>();
    report.provenance.tool_version = prov.at("tool_version").get<std::string>();
    return report;
}

void write_report(const std::filesystem::path& path, const AnalysisReport& report) {
    auto out = open_out(path);
    out << report_to_json(report).dump(2) << "\n";
}

AnalysisReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("report is not valid JSON: " + std::string(e.what()));
    }
    return report_from_json(j);
}

void write_signal_csv(const std::filesystem::path& path, const ConfidenceSignal& signal) {
    auto out = open_out(path);
    out << "index,timestamp_ms,confidence\n";
    for (std::size_t i = 0; i < signal.values.size(); ++i)
        out << i << "," << frame_timestamp_ms(static_cast<std::int64_t>(i), signal.fps) << ","
            << fmt(signal.values[i]) << "\n";
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    auto out = open_out(path);
    out << "frequency_hz,magnitude\n";
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i)
        out << fmt(spectrum.frequencies[i]) << "," << fmt(spectrum.magnitudes[i]) << "\n";
}

void write_loss_csv(const std::filesystem::path& path, const DetectionLossCurve& curve) {
    auto out = open_out(path);
    out << "threshold,fraction\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
        out << fmt(curve.thresholds[i]) << "," << fmt(curve.fraction_detected[i]) << "\n";
}

Comparison compare_reports(const AnalysisReport& a, const AnalysisReport& b) {
    Comparison cmp;
    auto row = [&](const std::string& name, double va, double vb) {
        ComparisonRow r;
        r.metric = name;
        r.a = va;
        r.b = vb;
        r.delta = vb - va;
        if (va != 0.0) r.pct = improvement_percent(va, vb);
        cmp.rows.push_back(std::move(r));
    };
    row("average", a.metrics.average, b.metrics.average);
    row("minimum", a.metrics.minimum, b.metrics.minimum);
    row("maximum", a.metrics.maximum, b.metrics.maximum);
    row("range", a.metrics.range, b.metrics.range);
    for (std::size_t i = 0; i < kAboveKeys.size(); ++i)
        row(kAboveKeys[i], a.metrics.fraction_above[i], b.metrics.fraction_above[i]);
    return cmp;
}

nlohmann::json comparison_to_json(const Comparison& cmp) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : cmp.rows) {
        nlohmann::json row = {{"metric", r.metric}, {"a", r.a}, {"b", r.b}, {"delta", r.delta}};
        row["pct"] = r.pct ? nlohmann::json(*r.pct) : nlohmann::json();
        rows.push_back(std::move(row));
    }
    return {{"rows", rows}};
}

std::string comparison_to_text(const Comparison& cmp) {
    std::ostringstream out;
    out << "metric        A          B          delta      pct\n";
    for (const auto& r : cmp.rows) {
        char line[128];
        if (r.pct)
            std::snprintf(line, sizeof(line), "%-12s  %9.4f  %9.4f  %+9.4f  %+8.2f%%\n", r.metric.c_str(), r.a,
                          r.b, r.delta, *r.pct);
        else
            std::snprintf(line, sizeof(line), "%-12s  %9.4f  %9.4f  %+9.4f        n/a\n", r.metric.c_str(), r.a,
                          r.b, r.delta);
        out << line;
    }
    return out.str();
}

nlohmann::json latency_report_to_json(const LatencyReport& report) {
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [name, summary] : report.stages)
        stages[name] = {{"mean_ms", summary.mean_ms}, {"p50_ms", summary.p50_ms}, {"p95_ms", summary.p95_ms}};
    return {{"stages", stages},
            {"total",
             {{"mean_ms", report.total.mean_ms}, {"p50_ms", report.total.p50_ms}, {"p95_ms", report.total.p95_ms}}},
            {"fps", report.fps},
            {"baseline", report.baseline_name},
            {"baseline_mean_ms", report.baseline_mean_ms},
            {"overhead_pct", report.overhead_pct}};
}

}  // namespace flarebench
