#include "wire.hpp"

#include <algorithm>

#include <json.hpp>

namespace tg {

using nlohmann::json;

namespace {

void check_fields(const json& j, std::initializer_list<const char*> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* f) {
                return it.key() == f;
            }) == allowed.end())
            throw WireError("unexpected field '" + it.key() + "'");
    }
    for (const char* f : allowed) {
        if (!j.contains(f))
            throw WireError(std::string("missing field '") + f + "'");
    }
}

std::uint64_t get_u64(const json& j, const char* field)
{
    if (!j.at(field).is_number_integer())
        throw WireError(std::string("field '") + field + "' must be an integer");
    if (!j.at(field).is_number_unsigned() && j.at(field).get<std::int64_t>() < 0)
        throw WireError(std::string("field '") + field + "' must be nonnegative");
    return j.at(field).get<std::uint64_t>();
}

}  // namespace

std::string encode(const WireMessage& msg)
{
    json j;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DetectionEvent>) {
                j["type"] = "detection";
                j["node_id"] = m.node_id;
                j["frame_seq"] = m.frame_seq;
                j["ts_ms"] = m.ts_ms;
                j["method_a"] = m.method_a;
                j["method_b"] = m.method_b;
                j["positive"] = m.positive;
                j["quadrants"] = m.quadrants;
                j["active_pixels"] = m.active_pixels;
            } else if constexpr (std::is_same_v<T, SafetyCommandMsg>) {
                j["type"] = "safety";
                j["node_id"] = m.node_id;
                j["frame_seq"] = m.frame_seq;
                j["level"] = to_string(m.level);
                j["reason"] = m.reason;
            } else if constexpr (std::is_same_v<T, AckMsg>) {
                j["type"] = "ack";
                j["frame_seq"] = m.frame_seq;
            } else if constexpr (std::is_same_v<T, HbMsg>) {
                j["type"] = "hb";
            } else if constexpr (std::is_same_v<T, StatusReqMsg>) {
                j["type"] = "status_req";
            } else if constexpr (std::is_same_v<T, StatusMsg>) {
                j["type"] = "status";
                j["node_id"] = m.node_id;
                j["frame_seq"] = m.frame_seq;
                j["level"] = m.level;
                j["uptime_ms"] = m.uptime_ms;
                j["frames"] = m.frames;
                j["positives"] = m.positives;
                j["commands"] = m.commands;
            } else if constexpr (std::is_same_v<T, ErrorMsg>) {
                j["type"] = "error";
                j["message"] = m.message;
            }
        },
        msg);
    return j.dump();
}

WireMessage decode_line(const std::string& line)
{
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw WireError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw WireError("message must be an object with a string 'type'");
    const std::string type = j.at("type").get<std::string>();

    try {
        if (type == "detection") {
            check_fields(j, {"type", "node_id", "frame_seq", "ts_ms", "method_a", "method_b",
                             "positive", "quadrants", "active_pixels"});
            DetectionEvent m;
            m.node_id = j.at("node_id").get<std::string>();
            m.frame_seq = get_u64(j, "frame_seq");
            m.ts_ms = j.at("ts_ms").get<std::int64_t>();
            m.method_a = j.at("method_a").get<bool>();
            m.method_b = j.at("method_b").get<bool>();
            m.positive = j.at("positive").get<bool>();
            m.quadrants = j.at("quadrants").get<std::vector<int>>();
            m.active_pixels = j.at("active_pixels").get<long>();
            for (int q : m.quadrants)
                if (q < 0 || q > 3)
                    throw WireError("quadrant index out of range");
            if (m.positive != (m.method_a || m.method_b))
                throw WireError("positive must equal method_a OR method_b");
            return m;
        }
        if (type == "safety") {
            check_fields(j, {"type", "node_id", "frame_seq", "level", "reason"});
            SafetyCommandMsg m;
            m.node_id = j.at("node_id").get<std::string>();
            m.frame_seq = get_u64(j, "frame_seq");
            const auto level = safety_level_from_string(j.at("level").get<std::string>());
            if (!level)
                throw WireError("bad level '" + j.at("level").get<std::string>() + "'");
            m.level = *level;
            m.reason = j.at("reason").get<std::string>();
            static const char* reasons[] = {"restricted", "caution", "motion", "clear",
                                            "failsafe"};
            if (std::find_if(std::begin(reasons), std::end(reasons), [&](const char* r) {
                    return m.reason == r;
                }) == std::end(reasons))
                throw WireError("bad reason '" + m.reason + "'");
            return m;
        }
        if (type == "ack") {
            check_fields(j, {"type", "frame_seq"});
            return AckMsg{get_u64(j, "frame_seq")};
        }
        if (type == "hb") {
            check_fields(j, {"type"});
            return HbMsg{};
        }
        if (type == "status_req") {
            check_fields(j, {"type"});
            return StatusReqMsg{};
        }
        if (type == "status") {
            check_fields(j, {"type", "node_id", "frame_seq", "level", "uptime_ms", "frames",
                             "positives", "commands"});
            StatusMsg m;
            m.node_id = j.at("node_id").get<std::string>();
            m.frame_seq = get_u64(j, "frame_seq");
            m.level = j.at("level").get<std::string>();
            m.uptime_ms = j.at("uptime_ms").get<std::int64_t>();
            m.frames = get_u64(j, "frames");
            m.positives = get_u64(j, "positives");
            m.commands = get_u64(j, "commands");
            if (!safety_level_from_string(m.level))
                throw WireError("bad level '" + m.level + "'");
            return m;
        }
        if (type == "error") {
            check_fields(j, {"type", "message"});
            return ErrorMsg{j.at("message").get<std::string>()};
        }
    } catch (const json::exception& e) {
        throw WireError(std::string("bad field value: ") + e.what());
    }
    throw WireError("unknown message type '" + type + "'");
}

}  // namespace tg
