#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "frame.hpp"

namespace tg {

// Radially symmetric heat source: contribution peak * exp(-d^2 / (2 r^2)).
struct HeatBlob {
    double x = 0, y = 0;
    double radius = 1;
    double peak = 0;
};

struct Waypoint {
    int frame = 0;
    double x = 0, y = 0;
};

// A person in the scene: blob shape plus a piecewise-linear path, present
// during [present_from, present_until).
struct SyntheticHuman {
    HeatBlob blob;             // x/y ignored, path provides the position
    std::vector<Waypoint> path;
    int present_from = 0;
    int present_until = 0;

    bool present_at(int frame) const { return frame >= present_from && frame < present_until; }
    void position_at(int frame, double& x, double& y) const;
};

struct Scene {
    std::string name;
    int ambient = 30;
    double noise_sigma = 2.0;
    std::vector<HeatBlob> equipment;   // static hot spots, hard negatives
    std::vector<SyntheticHuman> humans;
};

struct GroundTruthRow {
    bool positive = false;
    std::uint8_t quadrants = 0;  // quadrants containing a present human's center
    bool moving = false;
};

GroundTruthRow ground_truth(const Scene& scene, int frame_index);

// Deterministic given (scene, frame_index, seed). Equal R=G=B channels.
RawFrame render_frame(const Scene& scene, int frame_index, std::uint64_t seed);

// Writes frame_%05d.ppm files plus manifest.csv into out_dir and returns the
// manifest path. Byte-identical across runs with the same arguments.
std::filesystem::path generate_sequence(const Scene& scene, int n_frames, std::uint64_t seed,
                                        const std::filesystem::path& out_dir);

// Named scenes shipped with the tool; throws on unknown names.
Scene standard_scene(const std::string& name);
std::vector<std::string> standard_scene_names();

// FNV-1a 64-bit, used to pin generated-output digests.
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

}  // namespace tg
