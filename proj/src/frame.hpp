#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tg {

inline constexpr int kFrameWidth = 160;
inline constexpr int kFrameHeight = 120;
inline constexpr int kFramePixels = kFrameWidth * kFrameHeight;

// RGB thermal frame as delivered by a capture source, row-major, 3 bytes per pixel.
struct RawFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    bool operator==(const RawFrame&) const = default;
};

// Single-channel intensity frame, row-major.
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    bool operator==(const GrayFrame&) const = default;
};

// Normalized isotropic smoothing kernel, size x size, weights sum to 1.
struct GaussianKernel {
    int size = 0;
    double sigma = 0.0;
    std::vector<double> weights;

    double at(int i, int j) const { return weights[static_cast<size_t>(i) * size + j]; }
};

GrayFrame to_grayscale(const RawFrame& frame);
GaussianKernel build_kernel(int size, double sigma);
GrayFrame gaussian_smooth(const GrayFrame& frame, const GaussianKernel& kernel);

// The full pipeline the detectors consume: grayscale conversion then smoothing.
GrayFrame preprocess(const RawFrame& frame, const GaussianKernel& kernel);

// Binary netpbm codecs. P5 (PGM) and P6 (PPM) only, maxval 255.
// Readers tolerate '#' comment lines in the header; writers never emit them.
GrayFrame read_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_pgm(const GrayFrame& frame);
RawFrame read_ppm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_ppm(const RawFrame& frame);

// File loaders used by dataset/frame sources; these reject anything but 160x120.
RawFrame load_ppm(const std::filesystem::path& path);
GrayFrame load_pgm(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const RawFrame& frame);
void save_pgm(const std::filesystem::path& path, const GrayFrame& frame);

// Writes via a temp file in the same directory, then renames into place.
void atomic_write(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void atomic_write(const std::filesystem::path& path, const std::string& text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace tg
