#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tg {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text)
{
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

std::string KeyValueConfig::require(const std::string& key) const
{
    const auto v = get(key);
    if (!v)
        throw std::runtime_error("missing config key '" + key + "'");
    return *v;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const
{
    const auto v = get(key);
    if (!v)
        return fallback;
    try {
        return std::stol(*v);
    } catch (...) {
        throw std::runtime_error("config key '" + key + "' must be an integer, got '" + *v + "'");
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    const auto v = get(key);
    if (!v)
        return fallback;
    try {
        return std::stod(*v);
    } catch (...) {
        throw std::runtime_error("config key '" + key + "' must be a number, got '" + *v + "'");
    }
}

std::uint8_t parse_quadrant_mask(const std::string& s)
{
    std::uint8_t mask = 0;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty())
            continue;
        if (tok.size() != 2 || tok[0] != 'q' || tok[1] < '0' || tok[1] > '3')
            throw std::runtime_error("bad quadrant token '" + tok + "' (want q0..q3)");
        mask |= static_cast<std::uint8_t>(1 << (tok[1] - '0'));
    }
    return mask;
}

namespace {

std::vector<Endpoint> parse_endpoint_list(const std::string& s)
{
    std::vector<Endpoint> eps;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty())
            eps.push_back(parse_endpoint(tok));
    }
    return eps;
}

}  // namespace

NodeConfig parse_node_config(const KeyValueConfig& kv)
{
    NodeConfig cfg;
    cfg.node_id = kv.require("node.id");
    if (cfg.node_id.empty())
        throw std::runtime_error("node.id must be nonempty");

    const std::string type = kv.get_or("source.type", "replay");
    const double fps = kv.get_double("source.fps", 4.0);
    if (!(fps > 0))
        throw std::runtime_error("source.fps must be positive");
    if (type == "replay") {
        ReplaySource src;
        src.path = kv.require("source.path");
        src.fps = fps;
        cfg.source = src;
    } else if (type == "synth") {
        SynthSource src;
        src.scene = kv.require("source.scene");
        src.seed = static_cast<std::uint64_t>(kv.get_long("source.seed", 0));
        src.frames = static_cast<int>(kv.get_long("source.frames", 200));
        src.fps = fps;
        cfg.source = src;
    } else {
        throw std::runtime_error("source.type must be replay or synth, got '" + type + "'");
    }

    cfg.detector.kernel_size = static_cast<int>(kv.get_long("detector.kernel_size", 5));
    cfg.detector.kernel_sigma = kv.get_double("detector.kernel_sigma", 1.0);
    cfg.detector.motion.pixel_diff_threshold =
        static_cast<int>(kv.get_long("detector.pixel_diff_threshold", 25));
    cfg.detector.motion.active_fraction = kv.get_double("detector.active_fraction", 0.05);
    if (const auto r = kv.get("detector.ratio_threshold"))
        cfg.detector.roi = RoiConfig::from_ratio(std::stod(*r));
    cfg.detector.roi.mean_floor = kv.get_double("detector.mean_floor", 1.0);

    cfg.policy.monitored = parse_quadrant_mask(kv.get_or("zones.monitored", "q0,q1,q2,q3"));
    cfg.policy.restricted = parse_quadrant_mask(kv.get_or("zones.restricted", ""));
    cfg.policy.caution = parse_quadrant_mask(kv.get_or("zones.caution", ""));
    const std::string action = kv.get_or("zones.motion_action", "slow");
    if (action == "none")
        cfg.policy.motion_action = MotionAction::None;
    else if (action == "slow")
        cfg.policy.motion_action = MotionAction::Slow;
    else if (action == "stop")
        cfg.policy.motion_action = MotionAction::Stop;
    else
        throw std::runtime_error("zones.motion_action must be none|slow|stop");
    cfg.policy.validate();

    cfg.safety.release_frames = static_cast<int>(kv.get_long("safety.release_frames", 8));
    if (cfg.safety.release_frames < 1)
        throw std::runtime_error("safety.release_frames must be >= 1");

    if (const auto m = kv.get("machines"))
        cfg.machines = parse_endpoint_list(*m);
    if (const auto s = kv.get("edge_sink"))
        cfg.edge_sink = parse_endpoint(*s);
    if (const auto l = kv.get("listen"))
        cfg.listen = parse_endpoint(*l);
    return cfg;
}

NodeConfig load_node_config(const std::filesystem::path& path)
{
    return parse_node_config(KeyValueConfig::parse_file(path));
}

}  // namespace tg
