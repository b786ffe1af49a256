/* thermoguard — thermal-imaging human-presence detection toolkit.
 *
 * C API for the shared library. All functions return tg_status; on failure
 * tg_last_error() describes what went wrong (thread-local). Handles are
 * opaque and must be released with the matching _free function.
 */
#ifndef THERMOGUARD_H
#define THERMOGUARD_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tg_status {
    TG_OK = 0,
    TG_ERR_INVALID = 1,  /* bad arguments or malformed input */
    TG_ERR_IO = 2,       /* file or network I/O failure */
    TG_ERR_RUNTIME = 3,  /* other runtime failure */
    TG_ERR_FAILSAFE = 4  /* node aborted through the failsafe path */
} tg_status;

const char* tg_last_error(void);
const char* tg_version(void);
void tg_string_free(char* s);

/* ---- detector ---- */

typedef struct tg_detector_options {
    int pixel_diff_threshold;  /* default 25 */
    double active_fraction;    /* default 0.05 */
    double ratio_threshold;    /* default 0.20 */
    double mean_floor;         /* default 1.0 */
    int kernel_size;           /* default 5 */
    double kernel_sigma;       /* default 1.0 */
} tg_detector_options;

void tg_detector_options_init(tg_detector_options* opts);

typedef struct tg_raw_frame tg_raw_frame;
typedef struct tg_detector tg_detector;

typedef struct tg_detection {
    int positive;
    unsigned long long frame_seq;
    /* method A */
    int method_a_positive;
    long active_pixels;
    int background_updated;
    /* method B */
    int method_b_positive;
    int quadrant_flags[4]; /* 0 TL, 1 TR, 2 BL, 3 BR */
    double frame_mean;
    double quadrant_means[4];
} tg_detection;

tg_status tg_raw_frame_load(const char* ppm_path, tg_raw_frame** out);
void tg_raw_frame_free(tg_raw_frame* frame);

tg_status tg_detector_create(const tg_detector_options* opts, tg_detector** out);
void tg_detector_free(tg_detector* det);
/* Runs the hybrid pipeline (preprocess + method B + method A) on one frame
 * and advances the motion state. */
tg_status tg_detector_step(tg_detector* det, const tg_raw_frame* frame, tg_detection* out);
/* Drops the adaptive background so the next frame bootstraps it again. */
tg_status tg_detector_reset(tg_detector* det);

/* ---- pipeline ---- */

tg_status tg_preprocess_file(const char* in_ppm, const char* out_pgm, int kernel_size,
                             double kernel_sigma);

/* ---- evaluation ---- */

typedef struct tg_method_report {
    char method[8]; /* "a", "b" or "hybrid" */
    long tp, fp, fn, tn;
    double accuracy; /* percent, two decimals */
    double lat_min_ms, lat_mean_ms, lat_max_ms, lat_p99_ms;
} tg_method_report;

/* method is "a", "b" or "hybrid"; opts may be NULL for defaults. */
tg_status tg_eval_run(const char* manifest_path, const char* method,
                      const tg_detector_options* opts, tg_method_report* out);

/* Renders reports; *out is heap-allocated, free with tg_string_free. */
tg_status tg_eval_render_text(const tg_method_report* reports, int count,
                              const char* dataset_name, char** out);
tg_status tg_eval_render_csv(const tg_method_report* reports, int count, char** out);

/* Latency benchmark over preloaded frames; repeat >= 1 passes over the set. */
tg_status tg_bench_run(const char* manifest_path, const char* method, int repeat,
                       const tg_detector_options* opts, tg_method_report* out);

/* ---- synthetic scenes ---- */

/* Writes frame_%05d.ppm and manifest.csv into out_dir. If manifest_path_out is
 * non-NULL it receives the manifest path (free with tg_string_free). */
tg_status tg_synth_generate(const char* scene, int frames, unsigned long long seed,
                            const char* out_dir, char** manifest_path_out);
/* Comma-separated scene names; free with tg_string_free. */
tg_status tg_synth_scenes(char** out);

/* ---- node service ---- */

/* Runs the mist node from a key=value config file until the frame source is
 * exhausted. fast != 0 ignores the configured fps (replay at full speed). */
tg_status tg_node_run(const char* config_path, int fast);

/* Runs a simulated robot controller until the process is terminated.
 * Prints "listening on <port>" to stdout once ready. */
tg_status tg_machine_sim_run(const char* host, int port, const char* machine_id,
                             const char* log_path);

#ifdef __cplusplus
}
#endif

#endif /* THERMOGUARD_H */
