// Command-line front end. Talks to the core exclusively through the C API in
// thermoguard.h. Exit codes: 0 success, 2 usage/input error, 3 failsafe abort.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermoguard.h"

namespace {

int map_status(tg_status st)
{
    if (st == TG_OK)
        return 0;
    std::fprintf(stderr, "error: %s\n", tg_last_error());
    return st == TG_ERR_FAILSAFE ? 3 : 2;
}

void add_detector_flags(CLI::App* cmd, tg_detector_options* opts)
{
    cmd->add_option("--kernel", opts->kernel_size, "Gaussian kernel size (odd, >= 3)");
    cmd->add_option("--sigma", opts->kernel_sigma, "Gaussian kernel sigma");
    cmd->add_option("--pixel-diff-threshold", opts->pixel_diff_threshold,
                    "Method A per-pixel difference threshold");
    cmd->add_option("--active-fraction", opts->active_fraction,
                    "Method A active-pixel fraction threshold");
    cmd->add_option("--ratio-threshold", opts->ratio_threshold,
                    "Method B quadrant-over-frame mean ratio threshold");
}

std::string detection_json(const tg_detection& d)
{
    std::string quads;
    for (int q = 0; q < 4; ++q) {
        if (d.quadrant_flags[q]) {
            if (!quads.empty())
                quads += ",";
            quads += std::to_string(q);
        }
    }
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"frame_seq\":%llu,\"positive\":%s,\"method_a\":%s,\"method_b\":%s,"
                  "\"active_pixels\":%ld,\"quadrants\":[%s],\"frame_mean\":%.3f}",
                  d.frame_seq, d.positive ? "true" : "false",
                  d.method_a_positive ? "true" : "false",
                  d.method_b_positive ? "true" : "false", d.active_pixels, quads.c_str(),
                  d.frame_mean);
    return buf;
}

int run_detect(const std::vector<std::string>& inputs, const tg_detector_options& opts)
{
    tg_detector* det = nullptr;
    tg_status st = tg_detector_create(&opts, &det);
    if (st != TG_OK)
        return map_status(st);
    for (const auto& path : inputs) {
        tg_raw_frame* frame = nullptr;
        st = tg_raw_frame_load(path.c_str(), &frame);
        if (st != TG_OK)
            break;
        tg_detection d;
        st = tg_detector_step(det, frame, &d);
        tg_raw_frame_free(frame);
        if (st != TG_OK)
            break;
        std::printf("%s\n", detection_json(d).c_str());
    }
    tg_detector_free(det);
    return map_status(st);
}

bool parse_host_port(const std::string& s, std::string& host, int& port)
{
    const auto colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size())
        return false;
    host = s.substr(0, colon);
    try {
        port = std::stoi(s.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return port >= 0 && port <= 65535;
}

double budget_for(const std::string& method)
{
    if (method == "a")
        return 7.0;
    if (method == "b")
        return 6.0;
    return 10.0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"thermoguard — thermal-imaging human-presence safety toolkit"};
    app.require_subcommand(1);

    // preprocess
    auto* pre = app.add_subcommand("preprocess", "Grayscale + Gaussian smoothing, PPM to PGM");
    std::string pre_in, pre_out;
    int pre_kernel = 5;
    double pre_sigma = 1.0;
    pre->add_option("--in", pre_in, "Input PPM (P6) file")->required();
    pre->add_option("--out", pre_out, "Output PGM (P5) file")->required();
    pre->add_option("--kernel", pre_kernel, "Kernel size (odd, >= 3)");
    pre->add_option("--sigma", pre_sigma, "Kernel sigma");

    // detect
    auto* det = app.add_subcommand("detect", "Run the hybrid detector, print JSON per frame");
    std::vector<std::string> det_inputs;
    tg_detector_options det_opts;
    tg_detector_options_init(&det_opts);
    det->add_option("--in", det_inputs, "PPM frame file(s), processed in order")->required();
    add_detector_flags(det, &det_opts);

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a method over an annotated dataset");
    std::string ev_manifest, ev_method = "hybrid", ev_csv;
    tg_detector_options ev_opts;
    tg_detector_options_init(&ev_opts);
    ev->add_option("--manifest", ev_manifest, "Dataset manifest CSV")->required();
    ev->add_option("--method", ev_method, "a | b | hybrid");
    ev->add_option("--csv", ev_csv, "Also write a machine-readable CSV report here");
    add_detector_flags(ev, &ev_opts);

    // synth
    auto* sy = app.add_subcommand("synth", "Generate a synthetic labeled frame sequence");
    std::string sy_scene, sy_out;
    int sy_frames = 200;
    unsigned long long sy_seed = 0;
    sy->add_option("--scene", sy_scene, "Scene name (see --list-scenes)")->required();
    sy->add_option("--frames", sy_frames, "Number of frames");
    sy->add_option("--seed", sy_seed, "RNG seed");
    sy->add_option("--out", sy_out, "Output directory")->required();

    auto* sl = app.add_subcommand("list-scenes", "List available synthetic scenes");

    // bench
    auto* be = app.add_subcommand("bench", "In-memory per-frame latency benchmark");
    std::string be_manifest, be_method = "hybrid";
    int be_repeat = 1;
    tg_detector_options be_opts;
    tg_detector_options_init(&be_opts);
    be->add_option("--manifest", be_manifest, "Dataset manifest CSV")->required();
    be->add_option("--method", be_method, "a | b | hybrid");
    be->add_option("--repeat", be_repeat, "Passes over the dataset");
    add_detector_flags(be, &be_opts);

    // node
    auto* no = app.add_subcommand("node", "Run the mist safety node");
    std::string no_config;
    bool no_fast = false;
    no->add_option("--config", no_config, "Node config file (key = value)")->required();
    no->add_flag("--fast", no_fast, "Ignore configured fps, replay at full speed");

    // machine-sim
    auto* ms = app.add_subcommand("machine-sim", "Run a simulated robot controller");
    std::string ms_listen = "127.0.0.1:0", ms_id = "machine-1", ms_log = "machine.log.csv";
    ms->add_option("--listen", ms_listen, "host:port to listen on (port 0 = ephemeral)");
    ms->add_option("--id", ms_id, "Machine identifier");
    ms->add_option("--log", ms_log, "Command log CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (pre->parsed())
        return map_status(tg_preprocess_file(pre_in.c_str(), pre_out.c_str(), pre_kernel,
                                             pre_sigma));

    if (det->parsed())
        return run_detect(det_inputs, det_opts);

    if (ev->parsed()) {
        tg_method_report report;
        tg_status st = tg_eval_run(ev_manifest.c_str(), ev_method.c_str(), &ev_opts, &report);
        if (st != TG_OK)
            return map_status(st);
        char* text = nullptr;
        st = tg_eval_render_text(&report, 1, ev_manifest.c_str(), &text);
        if (st != TG_OK)
            return map_status(st);
        std::printf("%s", text);
        tg_string_free(text);
        if (!ev_csv.empty()) {
            char* csv = nullptr;
            st = tg_eval_render_csv(&report, 1, &csv);
            if (st != TG_OK)
                return map_status(st);
            FILE* f = std::fopen(ev_csv.c_str(), "w");
            if (!f) {
                std::fprintf(stderr, "error: cannot write %s\n", ev_csv.c_str());
                tg_string_free(csv);
                return 2;
            }
            std::fputs(csv, f);
            std::fclose(f);
            tg_string_free(csv);
        }
        return 0;
    }

    if (sy->parsed()) {
        char* manifest = nullptr;
        const tg_status st = tg_synth_generate(sy_scene.c_str(), sy_frames, sy_seed,
                                               sy_out.c_str(), &manifest);
        if (st != TG_OK)
            return map_status(st);
        std::printf("%s\n", manifest);
        tg_string_free(manifest);
        return 0;
    }

    if (sl->parsed()) {
        char* scenes = nullptr;
        if (tg_synth_scenes(&scenes) != TG_OK)
            return 2;
        std::printf("%s\n", scenes);
        tg_string_free(scenes);
        return 0;
    }

    if (be->parsed()) {
        tg_method_report report;
        const tg_status st =
            tg_bench_run(be_manifest.c_str(), be_method.c_str(), be_repeat, &be_opts, &report);
        if (st != TG_OK)
            return map_status(st);
        std::printf("method %s: min %.3f ms  mean %.3f ms  max %.3f ms  p99 %.3f ms\n",
                    report.method, report.lat_min_ms, report.lat_mean_ms, report.lat_max_ms,
                    report.lat_p99_ms);
        const double budget = budget_for(report.method);
        const char* verdict = report.lat_p99_ms <= budget          ? "PASS"
                              : report.lat_p99_ms <= 2.0 * budget  ? "WARN"
                                                                   : "FAIL";
        std::printf("budget %.0f ms p99: %s\n", budget, verdict);
        return std::string(verdict) == "FAIL" ? 1 : 0;
    }

    if (no->parsed())
        return map_status(tg_node_run(no_config.c_str(), no_fast ? 1 : 0));

    if (ms->parsed()) {
        std::string host;
        int port = 0;
        if (!parse_host_port(ms_listen, host, port)) {
            std::fprintf(stderr, "error: --listen must be host:port\n");
            return 2;
        }
        return map_status(tg_machine_sim_run(host.c_str(), port, ms_id.c_str(), ms_log.c_str()));
    }

    return 2;
}
