#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <variant>

#include "eval.hpp"
#include "netio.hpp"
#include "zones.hpp"

namespace tg {

// Flat "key = value" configuration with dotted keys. '#' starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::filesystem::path& path);
    static KeyValueConfig parse_text(const std::string& text);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

struct ReplaySource {
    std::filesystem::path path;  // directory of frame_*.ppm
    double fps = 4.0;
};

struct SynthSource {
    std::string scene;
    std::uint64_t seed = 0;
    int frames = 200;
    double fps = 4.0;
};

struct NodeConfig {
    std::string node_id;
    std::variant<ReplaySource, SynthSource> source;
    DetectorConfig detector;
    ZonePolicy policy;
    SafetyConfig safety;
    std::vector<Endpoint> machines;
    std::optional<Endpoint> edge_sink;
    std::optional<Endpoint> listen;
};

// Key list is documented in the README (node configuration section).
NodeConfig parse_node_config(const KeyValueConfig& kv);
NodeConfig load_node_config(const std::filesystem::path& path);

// "q0,q2" -> mask; empty string -> 0.
std::uint8_t parse_quadrant_mask(const std::string& s);

}  // namespace tg
