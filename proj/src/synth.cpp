#include "synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rng.hpp"

namespace tg {

void SyntheticHuman::position_at(int frame, double& x, double& y) const
{
    if (path.empty())
        throw std::invalid_argument("human has no path");
    if (frame <= path.front().frame) {
        x = path.front().x;
        y = path.front().y;
        return;
    }
    for (size_t i = 1; i < path.size(); ++i) {
        if (frame <= path[i].frame) {
            const auto& a = path[i - 1];
            const auto& b = path[i];
            const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
            x = a.x + t * (b.x - a.x);
            y = a.y + t * (b.y - a.y);
            return;
        }
    }
    x = path.back().x;
    y = path.back().y;
}

namespace {

int quadrant_of(double x, double y)
{
    return (y >= kFrameHeight / 2 ? 2 : 0) + (x >= kFrameWidth / 2 ? 1 : 0);
}

double blob_contribution(const HeatBlob& blob, double bx, double by, int px, int py)
{
    const double dx = px - bx;
    const double dy = py - by;
    return blob.peak * std::exp(-(dx * dx + dy * dy) / (2.0 * blob.radius * blob.radius));
}

}  // namespace

GroundTruthRow ground_truth(const Scene& scene, int frame_index)
{
    GroundTruthRow row;
    for (const auto& h : scene.humans) {
        if (!h.present_at(frame_index))
            continue;
        row.positive = true;
        double x, y;
        h.position_at(frame_index, x, y);
        row.quadrants |= static_cast<std::uint8_t>(1 << quadrant_of(x, y));
        if (h.present_at(frame_index + 1)) {
            double nx, ny;
            h.position_at(frame_index + 1, nx, ny);
            if (nx != x || ny != y)
                row.moving = true;
        }
    }
    return row;
}

RawFrame render_frame(const Scene& scene, int frame_index, std::uint64_t seed)
{
    if (scene.ambient < 0 || scene.ambient > 255)
        throw std::invalid_argument("ambient must be in [0,255]");

    struct Placed {
        const HeatBlob* blob;
        double x, y;
    };
    std::vector<Placed> placed;
    for (const auto& e : scene.equipment)
        placed.push_back({&e, e.x, e.y});
    for (const auto& h : scene.humans) {
        if (!h.present_at(frame_index))
            continue;
        double x, y;
        h.position_at(frame_index, x, y);
        placed.push_back({&h.blob, x, y});
    }

    Pcg32 rng(seed, static_cast<std::uint64_t>(frame_index) + 1);

    RawFrame frame;
    frame.width = kFrameWidth;
    frame.height = kFrameHeight;
    frame.rgb.resize(static_cast<size_t>(kFramePixels) * 3);
    size_t p = 0;
    for (int y = 0; y < kFrameHeight; ++y) {
        for (int x = 0; x < kFrameWidth; ++x) {
            double v = scene.ambient;
            for (const auto& pl : placed)
                v += blob_contribution(*pl.blob, pl.x, pl.y, x, y);
            if (scene.noise_sigma > 0)
                v += scene.noise_sigma * rng.gaussian();
            const long q = std::lround(v);
            const std::uint8_t byte = static_cast<std::uint8_t>(q < 0 ? 0 : q > 255 ? 255 : q);
            frame.rgb[p++] = byte;
            frame.rgb[p++] = byte;
            frame.rgb[p++] = byte;
        }
    }
    return frame;
}

std::filesystem::path generate_sequence(const Scene& scene, int n_frames, std::uint64_t seed,
                                        const std::filesystem::path& out_dir)
{
    if (n_frames < 1)
        throw std::invalid_argument("n_frames must be >= 1");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir))
        throw std::runtime_error("cannot create output directory " + out_dir.string());

    std::string manifest = "# scene=" + scene.name + " seed=" + std::to_string(seed) +
                           " frame_period_ms=250\n";
    manifest += "frame,label,quadrants\n";
    for (int i = 0; i < n_frames; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.ppm", i);
        save_ppm(out_dir / name, render_frame(scene, i, seed));

        const GroundTruthRow gt = ground_truth(scene, i);
        manifest += std::string(name) + "," + (gt.positive ? "pos" : "neg") + ",";
        bool first = true;
        for (int q = 0; q < 4; ++q) {
            if (gt.quadrants & (1 << q)) {
                if (!first)
                    manifest += "|";
                manifest += "q" + std::to_string(q);
                first = false;
            }
        }
        manifest += "\n";
    }

    const auto manifest_path = out_dir / "manifest.csv";
    atomic_write(manifest_path, manifest);
    return manifest_path;
}

Scene standard_scene(const std::string& name)
{
    Scene s;
    s.name = name;
    if (name == "ambient") {
        return s;
    }
    if (name == "walkthrough-42") {
        // One person crossing from the top-left quadrant into the top-right,
        // with a piece of warm equipment sitting in the bottom-left quadrant.
        s.equipment.push_back({40.0, 90.0, 6.0, 60.0});
        SyntheticHuman h;
        h.blob = {0, 0, 10.0, 180.0};
        h.present_from = 40;
        h.present_until = 160;
        h.path = {{40, 30.0, 30.0}, {159, 130.0, 30.0}};
        s.humans.push_back(h);
        return s;
    }
    if (name == "static-occupant") {
        // Person standing still in the bottom-right quadrant; exercises the
        // case Method A misses and Method B catches.
        s.equipment.push_back({40.0, 90.0, 6.0, 60.0});
        SyntheticHuman h;
        h.blob = {0, 0, 10.0, 180.0};
        h.present_from = 20;
        h.present_until = 180;
        h.path = {{20, 120.0, 90.0}};
        s.humans.push_back(h);
        return s;
    }
    throw std::invalid_argument("unknown scene '" + name + "'");
}

std::vector<std::string> standard_scene_names()
{
    return {"ambient", "walkthrough-42", "static-occupant"};
}

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path)
{
    return fnv1a64(read_file(path));
}

}  // namespace tg
