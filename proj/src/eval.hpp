#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "detect.hpp"

namespace tg {

enum class Mode { MethodA, MethodB, Hybrid };

const char* to_string(Mode mode);
// Accepts "a", "b", "hybrid" (case-insensitive).
std::optional<Mode> mode_from_string(const std::string& s);

// Everything a detector run needs, bundled for the eval/node/cli surfaces.
struct DetectorConfig {
    int kernel_size = 5;
    double kernel_sigma = 1.0;
    MotionConfig motion;
    RoiConfig roi;
};

struct ConfusionMatrix {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    long total() const { return tp + tn + fp + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

// Eq.-style accuracy 100*(tp+tn)/total, rounded to two decimals
// (half away from zero). Throws on an empty matrix.
double accuracy_percent(const ConfusionMatrix& cm);

struct DatasetEntry {
    std::filesystem::path frame_path;
    bool positive = false;
    std::uint8_t quadrants = 0;  // ground-truth quadrant mask, bit q set
};

struct AnnotatedDataset {
    std::string name;
    std::vector<DatasetEntry> entries;
};

// Manifest CSV: header "frame,label,quadrants", label in {pos,neg}, quadrants a
// '|'-separated subset of {q0..q3} or empty. Paths are relative to the
// manifest. Lines starting with '#' are skipped. Every referenced frame must
// exist and parse.
AnnotatedDataset load_dataset(const std::filesystem::path& manifest);

struct LatencyStats {
    double min_ms = 0, mean_ms = 0, max_ms = 0, p99_ms = 0;
};

LatencyStats latency_stats(std::vector<double> samples_ms);

struct RunResult {
    ConfusionMatrix cm;
    std::vector<double> latencies_ms;  // per frame, preprocess+detect only
};

// Runs the selected method over the dataset in manifest order with a fresh
// motion state. Frames are preloaded so the latency samples exclude file I/O.
RunResult run_eval(const AnnotatedDataset& dataset, const DetectorConfig& config, Mode mode);

// Same loop over frames already in memory (bench path).
RunResult run_frames(const std::vector<RawFrame>& frames, const std::vector<bool>& labels,
                     const DetectorConfig& config, Mode mode);

struct MethodReport {
    std::string method;
    ConfusionMatrix cm;
    double accuracy = 0.0;
    LatencyStats lat;
};

struct EvalReport {
    std::string dataset;
    std::string config_echo;
    std::vector<MethodReport> methods;
};

MethodReport make_method_report(Mode mode, const RunResult& run);

// Confusion-matrix cell: e.g. "1057 TP (94.97%)", percentage over the grand total.
std::string render_cell(long count, const char* klass, long total);

std::string render_text(const EvalReport& report);
// Fixed column order: method,tp,fp,fn,tn,accuracy,lat_min_ms,lat_mean_ms,lat_max_ms,lat_p99_ms
std::string render_csv(const EvalReport& report);

}  // namespace tg
