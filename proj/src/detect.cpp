#include "detect.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tg {

MotionResult method_a_step(MotionDetectorState& state, const GrayFrame& frame)
{
    if (frame.width <= 0 || frame.height <= 0 ||
        frame.pixels.size() != static_cast<size_t>(frame.width) * frame.height)
        throw std::invalid_argument("invalid frame");
    if (state.config.pixel_diff_threshold < 1 || state.config.pixel_diff_threshold > 255)
        throw std::invalid_argument("pixel_diff_threshold must be in [1,255]");
    if (!(state.config.active_fraction > 0.0 && state.config.active_fraction < 1.0))
        throw std::invalid_argument("active_fraction must be in (0,1)");

    MotionResult result;
    if (!state.background) {
        // First frame bootstraps the reference; no verdict yet.
        state.background = frame;
        result.background_updated = true;
        return result;
    }

    const GrayFrame& bg = *state.background;
    if (bg.width != frame.width || bg.height != frame.height)
        throw std::invalid_argument("frame dimensions do not match background");

    long active = 0;
    for (size_t i = 0; i < frame.pixels.size(); ++i) {
        const int diff = std::abs(static_cast<int>(frame.pixels[i]) - bg.pixels[i]);
        if (diff > state.config.pixel_diff_threshold)
            ++active;
    }

    const long total = static_cast<long>(frame.pixels.size());
    const long required =
        static_cast<long>(std::ceil(state.config.active_fraction * total - 1e-9));
    result.active_pixel_count = active;
    result.positive = active >= required;
    if (!result.positive) {
        // No significant movement: this frame becomes the new reference.
        state.background = frame;
        result.background_updated = true;
    }
    return result;
}

RoiConfig RoiConfig::from_ratio(double ratio_threshold)
{
    if (!(ratio_threshold > 0.0))
        throw std::invalid_argument("ratio_threshold must be positive");
    RoiConfig c;
    c.ratio_den = 10000;
    c.ratio_num = std::lround(ratio_threshold * c.ratio_den);
    if (c.ratio_num <= 0)
        throw std::invalid_argument("ratio_threshold too small");
    return c;
}

RoiResult method_b(const GrayFrame& frame, const RoiConfig& config)
{
    if (frame.width != kFrameWidth || frame.height != kFrameHeight)
        throw std::invalid_argument("method B expects a 160x120 frame");
    if (config.ratio_num <= 0 || config.ratio_den <= 0)
        throw std::invalid_argument("ratio threshold must be positive");

    const int qw = frame.width / 2;
    const int qh = frame.height / 2;
    long frame_sum = 0;
    std::array<long, 4> quadrant_sums{};
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const long v = frame.at(x, y);
            frame_sum += v;
            quadrant_sums[(y >= qh ? 2 : 0) + (x >= qw ? 1 : 0)] += v;
        }
    }

    const long total = static_cast<long>(frame.pixels.size());
    RoiResult result;
    result.frame_mean = static_cast<double>(frame_sum) / total;
    for (int q = 0; q < 4; ++q)
        result.quadrant_means[q] = static_cast<double>(quadrant_sums[q]) / (total / 4);

    if (result.frame_mean < config.mean_floor)
        return result;  // degenerate all-dark frame, nothing to compare against

    for (int q = 0; q < 4; ++q) {
        // mean_q >= (1 + ratio) * mean_frame, decided in exact integers
        if (config.ratio_den * 4 * quadrant_sums[q] >=
            (config.ratio_den + config.ratio_num) * frame_sum) {
            result.quadrant_flags[q] = true;
            result.positive = true;
        }
    }
    return result;
}

Detection hybrid_step(MotionDetectorState& state, const GrayFrame& frame,
                      const RoiConfig& config, std::uint64_t frame_seq)
{
    Detection d;
    d.frame_seq = frame_seq;
    d.method_b = method_b(frame, config);
    d.method_a = method_a_step(state, frame);
    d.positive = d.method_a.positive || d.method_b.positive;
    return d;
}

}  // namespace tg
