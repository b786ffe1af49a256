#include "eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tg {

const char* to_string(Mode mode)
{
    switch (mode) {
    case Mode::MethodA: return "a";
    case Mode::MethodB: return "b";
    case Mode::Hybrid: return "hybrid";
    }
    return "?";
}

std::optional<Mode> mode_from_string(const std::string& s)
{
    std::string t;
    for (char c : s)
        t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "a") return Mode::MethodA;
    if (t == "b") return Mode::MethodB;
    if (t == "hybrid") return Mode::Hybrid;
    return std::nullopt;
}

double accuracy_percent(const ConfusionMatrix& cm)
{
    const long total = cm.total();
    if (total <= 0)
        throw std::invalid_argument("empty confusion matrix");
    const double pct = 100.0 * (cm.tp + cm.tn) / total;
    return std::round(pct * 100.0) / 100.0;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

[[noreturn]] void manifest_error(const std::filesystem::path& manifest, int row,
                                 const std::string& what)
{
    throw std::runtime_error(manifest.string() + ":" + std::to_string(row) + ": " + what);
}

}  // namespace

AnnotatedDataset load_dataset(const std::filesystem::path& manifest)
{
    std::ifstream in(manifest);
    if (!in)
        throw std::runtime_error("cannot open manifest " + manifest.string());

    AnnotatedDataset ds;
    ds.name = manifest.parent_path().filename().string();
    if (ds.name.empty())
        ds.name = manifest.string();
    const auto base = manifest.parent_path();

    std::string line;
    int row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (split_csv_row(line) != std::vector<std::string>{"frame", "label", "quadrants"})
                manifest_error(manifest, row, "expected header frame,label,quadrants");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_row(line);
        if (fields.size() != 3)
            manifest_error(manifest, row, "expected 3 fields, got " + std::to_string(fields.size()));

        DatasetEntry e;
        e.frame_path = base / fields[0];
        if (fields[1] == "pos")
            e.positive = true;
        else if (fields[1] == "neg")
            e.positive = false;
        else
            manifest_error(manifest, row, "bad label '" + fields[1] + "' (want pos|neg)");

        if (!fields[2].empty()) {
            std::stringstream qs(fields[2]);
            std::string tok;
            while (std::getline(qs, tok, '|')) {
                if (tok.size() != 2 || tok[0] != 'q' || tok[1] < '0' || tok[1] > '3')
                    manifest_error(manifest, row, "bad quadrant token '" + tok + "'");
                e.quadrants |= static_cast<std::uint8_t>(1 << (tok[1] - '0'));
            }
        }
        if (!std::filesystem::exists(e.frame_path))
            manifest_error(manifest, row, "missing frame file " + e.frame_path.string());
        ds.entries.push_back(std::move(e));
    }
    if (!header_seen)
        throw std::runtime_error("manifest " + manifest.string() + " is empty");
    return ds;
}

LatencyStats latency_stats(std::vector<double> samples_ms)
{
    LatencyStats s;
    if (samples_ms.empty())
        return s;
    std::sort(samples_ms.begin(), samples_ms.end());
    s.min_ms = samples_ms.front();
    s.max_ms = samples_ms.back();
    double sum = 0;
    for (double v : samples_ms)
        sum += v;
    s.mean_ms = sum / samples_ms.size();
    const size_t idx = std::min(
        samples_ms.size() - 1,
        static_cast<size_t>(std::ceil(0.99 * samples_ms.size())) - 1);
    s.p99_ms = samples_ms[idx];
    return s;
}

RunResult run_frames(const std::vector<RawFrame>& frames, const std::vector<bool>& labels,
                     const DetectorConfig& config, Mode mode)
{
    if (frames.empty())
        throw std::invalid_argument("empty dataset");
    if (frames.size() != labels.size())
        throw std::invalid_argument("frames/labels size mismatch");

    const GaussianKernel kernel = build_kernel(config.kernel_size, config.kernel_sigma);
    MotionDetectorState state{config.motion, std::nullopt};

    RunResult result;
    result.latencies_ms.reserve(frames.size());
    for (size_t i = 0; i < frames.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const GrayFrame gray = preprocess(frames[i], kernel);
        bool predicted = false;
        switch (mode) {
        case Mode::MethodA:
            predicted = method_a_step(state, gray).positive;
            break;
        case Mode::MethodB:
            predicted = method_b(gray, config.roi).positive;
            break;
        case Mode::Hybrid:
            predicted = hybrid_step(state, gray, config.roi, i + 1).positive;
            break;
        }
        const auto t1 = std::chrono::steady_clock::now();
        result.latencies_ms.push_back(
            std::chrono::duration<double, std::milli>(t1 - t0).count());

        const bool label = labels[i];
        if (predicted && label) ++result.cm.tp;
        else if (predicted && !label) ++result.cm.fp;
        else if (!predicted && label) ++result.cm.fn;
        else ++result.cm.tn;
    }
    return result;
}

RunResult run_eval(const AnnotatedDataset& dataset, const DetectorConfig& config, Mode mode)
{
    if (dataset.entries.empty())
        throw std::invalid_argument("empty dataset");

    std::vector<RawFrame> frames;
    std::vector<bool> labels;
    frames.reserve(dataset.entries.size());
    for (size_t i = 0; i < dataset.entries.size(); ++i) {
        try {
            frames.push_back(load_ppm(dataset.entries[i].frame_path));
        } catch (const std::exception& e) {
            throw std::runtime_error("frame " + std::to_string(i) + ": " + e.what());
        }
        labels.push_back(dataset.entries[i].positive);
    }
    return run_frames(frames, labels, config, mode);
}

MethodReport make_method_report(Mode mode, const RunResult& run)
{
    MethodReport r;
    r.method = to_string(mode);
    r.cm = run.cm;
    r.accuracy = accuracy_percent(run.cm);
    r.lat = latency_stats(run.latencies_ms);
    return r;
}

namespace {

std::string fmt2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt3(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render_cell(long count, const char* klass, long total)
{
    const double pct = std::round(10000.0 * count / total) / 100.0;
    return std::to_string(count) + " " + klass + " (" + fmt2(pct) + "%)";
}

std::string render_text(const EvalReport& report)
{
    std::string out;
    out += "dataset: " + report.dataset + "\n";
    if (!report.config_echo.empty())
        out += "config: " + report.config_echo + "\n";
    for (const auto& m : report.methods) {
        const long total = m.cm.total();
        out += "\nmethod " + m.method + " (" + std::to_string(total) + " frames)\n";
        out += "                     ground truth positive | ground truth negative\n";
        out += "  predicted positive " + render_cell(m.cm.tp, "TP", total) + " | " +
               render_cell(m.cm.fp, "FP", total) + "\n";
        out += "  predicted negative " + render_cell(m.cm.fn, "FN", total) + " | " +
               render_cell(m.cm.tn, "TN", total) + "\n";
        out += "  accuracy: " + fmt2(m.accuracy) + "%\n";
        out += "  latency ms: min " + fmt3(m.lat.min_ms) + " mean " + fmt3(m.lat.mean_ms) +
               " max " + fmt3(m.lat.max_ms) + " p99 " + fmt3(m.lat.p99_ms) + "\n";
    }
    return out;
}

std::string render_csv(const EvalReport& report)
{
    std::string out =
        "method,tp,fp,fn,tn,accuracy,lat_min_ms,lat_mean_ms,lat_max_ms,lat_p99_ms\n";
    for (const auto& m : report.methods) {
        out += m.method + "," + std::to_string(m.cm.tp) + "," + std::to_string(m.cm.fp) + "," +
               std::to_string(m.cm.fn) + "," + std::to_string(m.cm.tn) + "," +
               fmt2(m.accuracy) + "," + fmt3(m.lat.min_ms) + "," + fmt3(m.lat.mean_ms) + "," +
               fmt3(m.lat.max_ms) + "," + fmt3(m.lat.p99_ms) + "\n";
    }
    return out;
}

}  // namespace tg
