#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "detect.hpp"

namespace tg {

enum class SafetyLevel { Run = 0, Slow = 1, Stop = 2 };

const char* to_string(SafetyLevel level);
std::optional<SafetyLevel> safety_level_from_string(const std::string& s);

enum class MotionAction { None, Slow, Stop };

// Quadrant sets are 4-bit masks, bit q = quadrant q (0 TL, 1 TR, 2 BL, 3 BR).
struct ZonePolicy {
    std::uint8_t monitored = 0b1111;
    std::uint8_t restricted = 0;   // occupancy forces STOP
    std::uint8_t caution = 0;      // occupancy forces SLOW
    MotionAction motion_action = MotionAction::Slow;

    void validate() const;
};

struct Occupancy {
    bool restricted_hit = false;
    bool caution_hit = false;
    bool motion_only = false;
};

Occupancy zone_occupancy(const Detection& detection, const ZonePolicy& policy);

struct SafetyConfig {
    int release_frames = 8;  // consecutive clear frames before stepping down
};

struct SafetyState {
    SafetyLevel level = SafetyLevel::Run;
    int clear_streak = 0;
};

enum class SafetyReason { Restricted, Caution, Motion, Clear, Failsafe };

const char* to_string(SafetyReason reason);

struct SafetyTransition {
    SafetyLevel level;
    SafetyReason reason;
};

// Advances the safety state machine for one frame. Escalation toward STOP is
// immediate; stepping back toward RUN happens one level per frame once
// release_frames consecutive clear frames have been seen. Returns a transition
// exactly when the level changed.
std::optional<SafetyTransition> safety_step(SafetyState& state, const Occupancy& occupancy,
                                            const SafetyConfig& config,
                                            const ZonePolicy& policy);

}  // namespace tg
