#include "thermoguard.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "eval.hpp"
#include "node.hpp"
#include "synth.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg)
{
    g_last_error = msg;
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
tg_status guarded(Fn&& fn)
{
    try {
        return fn();
    } catch (const tg::FailsafeError& e) {
        set_error(e.what());
        return TG_ERR_FAILSAFE;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return TG_ERR_INVALID;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TG_ERR_RUNTIME;
    } catch (...) {
        set_error("unknown error");
        return TG_ERR_RUNTIME;
    }
}

tg::DetectorConfig to_config(const tg_detector_options* opts)
{
    tg::DetectorConfig cfg;
    if (!opts)
        return cfg;
    cfg.kernel_size = opts->kernel_size;
    cfg.kernel_sigma = opts->kernel_sigma;
    cfg.motion.pixel_diff_threshold = opts->pixel_diff_threshold;
    cfg.motion.active_fraction = opts->active_fraction;
    cfg.roi = tg::RoiConfig::from_ratio(opts->ratio_threshold);
    cfg.roi.mean_floor = opts->mean_floor;
    return cfg;
}

void fill_report(tg_method_report* out, const tg::MethodReport& r)
{
    std::snprintf(out->method, sizeof out->method, "%s", r.method.c_str());
    out->tp = r.cm.tp;
    out->fp = r.cm.fp;
    out->fn = r.cm.fn;
    out->tn = r.cm.tn;
    out->accuracy = r.accuracy;
    out->lat_min_ms = r.lat.min_ms;
    out->lat_mean_ms = r.lat.mean_ms;
    out->lat_max_ms = r.lat.max_ms;
    out->lat_p99_ms = r.lat.p99_ms;
}

tg::MethodReport from_report(const tg_method_report& r)
{
    tg::MethodReport m;
    m.method = r.method;
    m.cm = {r.tp, r.tn, r.fp, r.fn};
    m.accuracy = r.accuracy;
    m.lat = {r.lat_min_ms, r.lat_mean_ms, r.lat_max_ms, r.lat_p99_ms};
    return m;
}

}  // namespace

struct tg_raw_frame {
    tg::RawFrame frame;
};

struct tg_detector {
    tg::DetectorConfig config;
    tg::GaussianKernel kernel;
    tg::MotionDetectorState motion;
    unsigned long long seq = 0;
};

extern "C" {

const char* tg_last_error(void)
{
    return g_last_error.c_str();
}

const char* tg_version(void)
{
    return "1.0.0";
}

void tg_string_free(char* s)
{
    std::free(s);
}

void tg_detector_options_init(tg_detector_options* opts)
{
    if (!opts)
        return;
    opts->pixel_diff_threshold = 25;
    opts->active_fraction = 0.05;
    opts->ratio_threshold = 0.20;
    opts->mean_floor = 1.0;
    opts->kernel_size = 5;
    opts->kernel_sigma = 1.0;
}

tg_status tg_raw_frame_load(const char* ppm_path, tg_raw_frame** out)
{
    if (!ppm_path || !out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        auto* f = new tg_raw_frame{tg::load_ppm(ppm_path)};
        *out = f;
        return TG_OK;
    });
}

void tg_raw_frame_free(tg_raw_frame* frame)
{
    delete frame;
}

tg_status tg_detector_create(const tg_detector_options* opts, tg_detector** out)
{
    if (!out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        auto* det = new tg_detector;
        det->config = to_config(opts);
        try {
            det->kernel = tg::build_kernel(det->config.kernel_size, det->config.kernel_sigma);
        } catch (...) {
            delete det;
            throw;
        }
        det->motion = {det->config.motion, std::nullopt};
        *out = det;
        return TG_OK;
    });
}

void tg_detector_free(tg_detector* det)
{
    delete det;
}

tg_status tg_detector_step(tg_detector* det, const tg_raw_frame* frame, tg_detection* out)
{
    if (!det || !frame || !out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        const tg::GrayFrame gray = tg::preprocess(frame->frame, det->kernel);
        const tg::Detection d =
            tg::hybrid_step(det->motion, gray, det->config.roi, ++det->seq);
        out->positive = d.positive;
        out->frame_seq = d.frame_seq;
        out->method_a_positive = d.method_a.positive;
        out->active_pixels = d.method_a.active_pixel_count;
        out->background_updated = d.method_a.background_updated;
        out->method_b_positive = d.method_b.positive;
        for (int q = 0; q < 4; ++q) {
            out->quadrant_flags[q] = d.method_b.quadrant_flags[q];
            out->quadrant_means[q] = d.method_b.quadrant_means[q];
        }
        out->frame_mean = d.method_b.frame_mean;
        return TG_OK;
    });
}

tg_status tg_detector_reset(tg_detector* det)
{
    if (!det) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    det->motion.background.reset();
    det->seq = 0;
    return TG_OK;
}

tg_status tg_preprocess_file(const char* in_ppm, const char* out_pgm, int kernel_size,
                             double kernel_sigma)
{
    if (!in_ppm || !out_pgm) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        const tg::GaussianKernel kernel = tg::build_kernel(kernel_size, kernel_sigma);
        const tg::RawFrame raw = tg::load_ppm(in_ppm);
        tg::save_pgm(out_pgm, tg::preprocess(raw, kernel));
        return TG_OK;
    });
}

tg_status tg_eval_run(const char* manifest_path, const char* method,
                      const tg_detector_options* opts, tg_method_report* out)
{
    if (!manifest_path || !method || !out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        const auto mode = tg::mode_from_string(method);
        if (!mode)
            throw std::invalid_argument(std::string("unknown method '") + method + "'");
        const tg::AnnotatedDataset ds = tg::load_dataset(manifest_path);
        const tg::RunResult run = tg::run_eval(ds, to_config(opts), *mode);
        fill_report(out, tg::make_method_report(*mode, run));
        return TG_OK;
    });
}

tg_status tg_eval_render_text(const tg_method_report* reports, int count,
                              const char* dataset_name, char** out)
{
    if (!reports || count < 1 || !out) {
        set_error("null argument or empty report");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        tg::EvalReport rep;
        rep.dataset = dataset_name ? dataset_name : "";
        for (int i = 0; i < count; ++i)
            rep.methods.push_back(from_report(reports[i]));
        *out = dup_string(tg::render_text(rep));
        return TG_OK;
    });
}

tg_status tg_eval_render_csv(const tg_method_report* reports, int count, char** out)
{
    if (!reports || count < 1 || !out) {
        set_error("null argument or empty report");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        tg::EvalReport rep;
        for (int i = 0; i < count; ++i)
            rep.methods.push_back(from_report(reports[i]));
        *out = dup_string(tg::render_csv(rep));
        return TG_OK;
    });
}

tg_status tg_bench_run(const char* manifest_path, const char* method, int repeat,
                       const tg_detector_options* opts, tg_method_report* out)
{
    if (!manifest_path || !method || !out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        if (repeat < 1)
            throw std::invalid_argument("repeat must be >= 1");
        const auto mode = tg::mode_from_string(method);
        if (!mode)
            throw std::invalid_argument(std::string("unknown method '") + method + "'");
        const tg::AnnotatedDataset ds = tg::load_dataset(manifest_path);

        std::vector<tg::RawFrame> frames;
        std::vector<bool> labels;
        for (const auto& e : ds.entries) {
            frames.push_back(tg::load_ppm(e.frame_path));
            labels.push_back(e.positive);
        }

        tg::RunResult total;
        for (int r = 0; r < repeat; ++r) {
            tg::RunResult run = tg::run_frames(frames, labels, to_config(opts), *mode);
            total.cm = run.cm;
            total.latencies_ms.insert(total.latencies_ms.end(), run.latencies_ms.begin(),
                                      run.latencies_ms.end());
        }
        fill_report(out, tg::make_method_report(*mode, total));
        return TG_OK;
    });
}

tg_status tg_synth_generate(const char* scene, int frames, unsigned long long seed,
                            const char* out_dir, char** manifest_path_out)
{
    if (!scene || !out_dir) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        const tg::Scene s = tg::standard_scene(scene);
        const auto manifest = tg::generate_sequence(s, frames, seed, out_dir);
        if (manifest_path_out)
            *manifest_path_out = dup_string(manifest.string());
        return TG_OK;
    });
}

tg_status tg_synth_scenes(char** out)
{
    if (!out) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    std::string joined;
    for (const auto& name : tg::standard_scene_names()) {
        if (!joined.empty())
            joined += ",";
        joined += name;
    }
    *out = dup_string(joined);
    return TG_OK;
}

tg_status tg_node_run(const char* config_path, int fast)
{
    if (!config_path) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        tg::Node node(tg::load_node_config(config_path));
        node.run(fast != 0);
        return TG_OK;
    });
}

tg_status tg_machine_sim_run(const char* host, int port, const char* machine_id,
                             const char* log_path)
{
    if (!host || !machine_id || !log_path) {
        set_error("null argument");
        return TG_ERR_INVALID;
    }
    return guarded([&] {
        tg::MachineSim sim(host, port, machine_id, log_path);
        std::printf("listening on %d\n", sim.port());
        std::fflush(stdout);
        sim.run();
        return TG_OK;
    });
}

}  // extern "C"
