#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zones.hpp"

namespace tg {

// Wire protocol: newline-delimited JSON over TCP, UTF-8, one object per line.
// Field sets are closed; unknown fields or types are rejected on decode.
// No message carries pixel data.

struct DetectionEvent {
    std::string node_id;
    std::uint64_t frame_seq = 0;
    std::int64_t ts_ms = 0;
    bool method_a = false;
    bool method_b = false;
    bool positive = false;
    std::vector<int> quadrants;  // flagged quadrant indices
    long active_pixels = 0;

    bool operator==(const DetectionEvent&) const = default;
};

struct SafetyCommandMsg {
    std::string node_id;
    std::uint64_t frame_seq = 0;
    SafetyLevel level = SafetyLevel::Run;
    std::string reason;

    bool operator==(const SafetyCommandMsg&) const = default;
};

struct AckMsg {
    std::uint64_t frame_seq = 0;
    bool operator==(const AckMsg&) const = default;
};

struct HbMsg {
    bool operator==(const HbMsg&) const = default;
};

struct StatusReqMsg {
    bool operator==(const StatusReqMsg&) const = default;
};

struct StatusMsg {
    std::string node_id;
    std::uint64_t frame_seq = 0;
    std::string level;
    std::int64_t uptime_ms = 0;
    std::uint64_t frames = 0;
    std::uint64_t positives = 0;
    std::uint64_t commands = 0;

    bool operator==(const StatusMsg&) const = default;
};

// Reply the machine simulator sends back for lines it cannot parse. Not part
// of the node's normal protocol.
struct ErrorMsg {
    std::string message;
    bool operator==(const ErrorMsg&) const = default;
};

using WireMessage = std::variant<DetectionEvent, SafetyCommandMsg, AckMsg, HbMsg,
                                 StatusReqMsg, StatusMsg, ErrorMsg>;

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One JSON object, no trailing newline.
std::string encode(const WireMessage& msg);
WireMessage decode_line(const std::string& line);

}  // namespace tg
