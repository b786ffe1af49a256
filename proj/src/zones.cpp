#include "zones.hpp"

#include <stdexcept>

namespace tg {

const char* to_string(SafetyLevel level)
{
    switch (level) {
    case SafetyLevel::Run: return "RUN";
    case SafetyLevel::Slow: return "SLOW";
    case SafetyLevel::Stop: return "STOP";
    }
    return "?";
}

std::optional<SafetyLevel> safety_level_from_string(const std::string& s)
{
    if (s == "RUN") return SafetyLevel::Run;
    if (s == "SLOW") return SafetyLevel::Slow;
    if (s == "STOP") return SafetyLevel::Stop;
    return std::nullopt;
}

const char* to_string(SafetyReason reason)
{
    switch (reason) {
    case SafetyReason::Restricted: return "restricted";
    case SafetyReason::Caution: return "caution";
    case SafetyReason::Motion: return "motion";
    case SafetyReason::Clear: return "clear";
    case SafetyReason::Failsafe: return "failsafe";
    }
    return "?";
}

void ZonePolicy::validate() const
{
    if (monitored > 0b1111 || restricted > 0b1111 || caution > 0b1111)
        throw std::invalid_argument("quadrant masks use bits 0..3 only");
    if (restricted & caution)
        throw std::invalid_argument("restricted and caution zones must be disjoint");
    if ((restricted | caution) & ~monitored)
        throw std::invalid_argument("restricted/caution zones must be monitored");
}

Occupancy zone_occupancy(const Detection& detection, const ZonePolicy& policy)
{
    policy.validate();
    std::uint8_t flagged = 0;
    for (int q = 0; q < 4; ++q)
        if (detection.method_b.quadrant_flags[q])
            flagged |= static_cast<std::uint8_t>(1 << q);
    flagged &= policy.monitored;  // flags outside monitored zones are ignored

    Occupancy occ;
    occ.restricted_hit = (flagged & policy.restricted) != 0;
    occ.caution_hit = (flagged & policy.caution) != 0;
    occ.motion_only = detection.method_a.positive && flagged == 0;
    return occ;
}

namespace {

SafetyLevel step_down(SafetyLevel level)
{
    return level == SafetyLevel::Stop ? SafetyLevel::Slow : SafetyLevel::Run;
}

}  // namespace

std::optional<SafetyTransition> safety_step(SafetyState& state, const Occupancy& occupancy,
                                            const SafetyConfig& config,
                                            const ZonePolicy& policy)
{
    if (config.release_frames < 1)
        throw std::invalid_argument("release_frames must be >= 1");

    // Target level demanded by this frame's occupancy, if any.
    std::optional<SafetyTransition> target;
    if (occupancy.restricted_hit) {
        target = {SafetyLevel::Stop, SafetyReason::Restricted};
    } else if (occupancy.motion_only && policy.motion_action == MotionAction::Stop) {
        target = {SafetyLevel::Stop, SafetyReason::Motion};
    } else if (occupancy.caution_hit) {
        target = {SafetyLevel::Slow, SafetyReason::Caution};
    } else if (occupancy.motion_only && policy.motion_action == MotionAction::Slow) {
        target = {SafetyLevel::Slow, SafetyReason::Motion};
    }

    if (target) {
        state.clear_streak = 0;
        if (target->level > state.level) {
            state.level = target->level;
            return target;
        }
        return std::nullopt;
    }

    // Fully clear frame: count toward release, then step down one level per frame.
    ++state.clear_streak;
    if (state.clear_streak >= config.release_frames && state.level > SafetyLevel::Run) {
        state.level = step_down(state.level);
        return SafetyTransition{state.level, SafetyReason::Clear};
    }
    return std::nullopt;
}

}  // namespace tg
