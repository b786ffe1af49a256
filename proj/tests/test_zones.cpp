#include <doctest.h>

#include <random>

#include "zones.hpp"

using namespace tg;

namespace {

Detection detection_with(std::uint8_t flagged_mask, bool motion)
{
    Detection d;
    for (int q = 0; q < 4; ++q)
        d.method_b.quadrant_flags[q] = flagged_mask & (1 << q);
    d.method_b.positive = flagged_mask != 0;
    d.method_a.positive = motion;
    d.positive = d.method_a.positive || d.method_b.positive;
    return d;
}

// The four occupancy archetypes the safety machine distinguishes.
enum Case { Clear = 0, MotionOnly = 1, Caution = 2, Restricted = 3 };

Occupancy occupancy_for(Case c)
{
    Occupancy o;
    o.restricted_hit = c == Restricted;
    o.caution_hit = c == Caution;
    o.motion_only = c == MotionOnly;
    return o;
}

}  // namespace

TEST_CASE("zone occupancy mapping")
{
    ZonePolicy policy;
    policy.monitored = 0b0011;  // Q0, Q1
    policy.restricted = 0b0010; // Q1
    policy.caution = 0b0001;    // Q0

    SUBCASE("heat outside monitored zones is ignored")
    {
        const Occupancy o = zone_occupancy(detection_with(0b1000, false), policy);
        CHECK(!o.restricted_hit);
        CHECK(!o.caution_hit);
        CHECK(!o.motion_only);
    }
    SUBCASE("restricted membership")
    {
        const Occupancy o = zone_occupancy(detection_with(0b0010, false), policy);
        CHECK(o.restricted_hit);
        CHECK(!o.caution_hit);
    }
    SUBCASE("caution membership")
    {
        CHECK(zone_occupancy(detection_with(0b0001, false), policy).caution_hit);
    }
    SUBCASE("motion with no monitored quadrant flagged")
    {
        const Occupancy o = zone_occupancy(detection_with(0, true), policy);
        CHECK(o.motion_only);
        // motion plus unmonitored heat still counts as motion-only
        CHECK(zone_occupancy(detection_with(0b0100, true), policy).motion_only);
        // motion plus monitored heat does not
        CHECK(!zone_occupancy(detection_with(0b0001, true), policy).motion_only);
    }
    SUBCASE("unmonitored quadrant flags never influence the outputs")
    {
        std::mt19937 rng(9);
        for (int iter = 0; iter < 200; ++iter) {
            const auto monitored_part = static_cast<std::uint8_t>(rng() % 4);  // within Q0|Q1
            const auto junk = static_cast<std::uint8_t>((rng() % 4) << 2);     // Q2|Q3 noise
            const bool motion = rng() % 2;
            const Occupancy a = zone_occupancy(detection_with(monitored_part, motion), policy);
            const Occupancy b =
                zone_occupancy(detection_with(monitored_part | junk, motion), policy);
            CHECK(a.restricted_hit == b.restricted_hit);
            CHECK(a.caution_hit == b.caution_hit);
            CHECK(a.motion_only == b.motion_only);
        }
    }
    SUBCASE("invalid policies rejected")
    {
        ZonePolicy bad;
        bad.monitored = 0b0001;
        bad.restricted = 0b0010;  // restricted outside monitored
        Detection d;
        CHECK_THROWS_AS(zone_occupancy(d, bad), std::invalid_argument);
        bad = ZonePolicy{};
        bad.restricted = 0b0001;
        bad.caution = 0b0001;  // overlap
        CHECK_THROWS_AS(zone_occupancy(d, bad), std::invalid_argument);
    }
}

TEST_CASE("safety state machine")
{
    const ZonePolicy policy;  // defaults: all monitored, motion_action slow
    const SafetyConfig config;  // release_frames 8

    SUBCASE("restricted occupancy stops in the same step from any level")
    {
        for (SafetyLevel start : {SafetyLevel::Run, SafetyLevel::Slow, SafetyLevel::Stop}) {
            SafetyState state{start, 3};
            const auto t = safety_step(state, occupancy_for(Restricted), config, policy);
            CHECK(state.level == SafetyLevel::Stop);
            if (start != SafetyLevel::Stop) {
                REQUIRE(t.has_value());
                CHECK(t->level == SafetyLevel::Stop);
                CHECK(t->reason == SafetyReason::Restricted);
            } else {
                CHECK(!t.has_value());
            }
        }
    }

    SUBCASE("seven clear frames do not release a STOP, the eighth does")
    {
        SafetyState state{SafetyLevel::Stop, 0};
        for (int i = 0; i < 7; ++i) {
            const auto t = safety_step(state, occupancy_for(Clear), config, policy);
            CHECK(!t.has_value());
            CHECK(state.level == SafetyLevel::Stop);
        }
        const auto t8 = safety_step(state, occupancy_for(Clear), config, policy);
        REQUIRE(t8.has_value());
        CHECK(t8->level == SafetyLevel::Slow);
        CHECK(t8->reason == SafetyReason::Clear);
        // one more clear frame completes the walk back to RUN
        const auto t9 = safety_step(state, occupancy_for(Clear), config, policy);
        REQUIRE(t9.has_value());
        CHECK(t9->level == SafetyLevel::Run);
    }

    SUBCASE("caution escalates RUN to SLOW and resets the clear streak")
    {
        SafetyState state{SafetyLevel::Run, 5};
        const auto t = safety_step(state, occupancy_for(Caution), config, policy);
        REQUIRE(t.has_value());
        CHECK(t->level == SafetyLevel::Slow);
        CHECK(t->reason == SafetyReason::Caution);
        CHECK(state.clear_streak == 0);
    }

    SUBCASE("motion escalates per the configured action")
    {
        SafetyState state;
        auto t = safety_step(state, occupancy_for(MotionOnly), config, policy);
        REQUIRE(t.has_value());
        CHECK(t->level == SafetyLevel::Slow);
        CHECK(t->reason == SafetyReason::Motion);

        ZonePolicy stop_policy;
        stop_policy.motion_action = MotionAction::Stop;
        SafetyState s2;
        t = safety_step(s2, occupancy_for(MotionOnly), config, stop_policy);
        REQUIRE(t.has_value());
        CHECK(t->level == SafetyLevel::Stop);

        ZonePolicy none_policy;
        none_policy.motion_action = MotionAction::None;
        SafetyState s3;
        CHECK(!safety_step(s3, occupancy_for(MotionOnly), config, none_policy).has_value());
        CHECK(s3.level == SafetyLevel::Run);
    }

    SUBCASE("caution while stopped keeps STOP and resets the streak, no command")
    {
        SafetyState state{SafetyLevel::Stop, 6};
        const auto t = safety_step(state, occupancy_for(Caution), config, policy);
        CHECK(!t.has_value());
        CHECK(state.level == SafetyLevel::Stop);
        CHECK(state.clear_streak == 0);
    }

    SUBCASE("exhaustive small sequences: release discipline and command economy")
    {
        // Walk every occupancy sequence of length <= 12 and check, at every
        // step: de-escalation only after release_frames consecutive clear
        // frames, restricted implies STOP immediately, and a command is
        // emitted iff the level changed.
        const SafetyConfig cfg{3};  // short window keeps the tree shallow enough to matter
        struct Walker {
            const ZonePolicy& policy;
            const SafetyConfig& cfg;
            long visited = 0;

            void walk(SafetyState state, int depth, unsigned recent_clear)
            {
                if (depth == 12)
                    return;
                for (int c = 0; c < 4; ++c) {
                    SafetyState next = state;
                    const auto t =
                        safety_step(next, occupancy_for(static_cast<Case>(c)), cfg, policy);
                    ++visited;

                    const unsigned next_recent =
                        ((recent_clear << 1) | (c == Clear ? 1u : 0u)) & 0x7u;
                    if (next.level < state.level) {
                        // stepping toward RUN requires 3 trailing clear frames
                        REQUIRE(next_recent == 0x7u);
                    }
                    if (c == Restricted)
                        REQUIRE(next.level == SafetyLevel::Stop);
                    REQUIRE(t.has_value() == (next.level != state.level));
                    walk(next, depth + 1, next_recent);
                }
            }
        };
        Walker w{policy, cfg};
        w.walk(SafetyState{}, 0, 0);
        CHECK(w.visited > 1000000);
    }

    SUBCASE("release_frames must be at least one")
    {
        SafetyState state;
        CHECK_THROWS_AS(safety_step(state, occupancy_for(Clear), SafetyConfig{0}, policy),
                        std::invalid_argument);
    }
}
