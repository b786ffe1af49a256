#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "frame.hpp"

namespace tg {

// Movement detector (background differencing). The background frame adapts on
// every negative result and is frozen while motion is being reported.
struct MotionConfig {
    int pixel_diff_threshold = 25;      // |frame - background| must exceed this
    double active_fraction = 0.05;      // fraction of pixels that must be active
};

struct MotionDetectorState {
    MotionConfig config;
    std::optional<GrayFrame> background;
};

struct MotionResult {
    bool positive = false;
    long active_pixel_count = 0;
    bool background_updated = false;
};

MotionResult method_a_step(MotionDetectorState& state, const GrayFrame& frame);

// Region-of-interest detector over the four 80x60 quadrants.
// Quadrant order: 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right.
struct RoiConfig {
    // Ratio threshold as a rational so the 20% boundary is decided in exact
    // integer arithmetic: flag iff den * 4 * sum_quadrant >= (den + num) * sum_frame.
    long ratio_num = 20;
    long ratio_den = 100;
    double mean_floor = 1.0;  // frames with mean below this are reported negative

    double ratio() const { return static_cast<double>(ratio_num) / ratio_den; }
    static RoiConfig from_ratio(double ratio_threshold);
};

struct RoiResult {
    bool positive = false;
    std::array<bool, 4> quadrant_flags{};
    double frame_mean = 0.0;
    std::array<double, 4> quadrant_means{};
};

RoiResult method_b(const GrayFrame& frame, const RoiConfig& config);

// Hybrid fusion: Method B then Method A on the same frame; the verdict is the
// OR of the two votes and Method A's state advances every frame.
struct Detection {
    bool positive = false;
    MotionResult method_a;
    RoiResult method_b;
    std::uint64_t frame_seq = 0;
};

Detection hybrid_step(MotionDetectorState& state, const GrayFrame& frame,
                      const RoiConfig& config, std::uint64_t frame_seq);

}  // namespace tg
