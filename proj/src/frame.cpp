#include "frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tg {

namespace {

std::uint8_t clamp_byte(long v)
{
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

void check_raw(const RawFrame& f)
{
    if (f.width <= 0 || f.height <= 0)
        throw std::invalid_argument("frame dimensions must be positive");
    if (f.rgb.size() != static_cast<size_t>(f.width) * f.height * 3)
        throw std::invalid_argument("RGB payload size does not match dimensions");
}

void check_gray(const GrayFrame& f)
{
    if (f.width <= 0 || f.height <= 0)
        throw std::invalid_argument("frame dimensions must be positive");
    if (f.pixels.size() != static_cast<size_t>(f.width) * f.height)
        throw std::invalid_argument("pixel payload size does not match dimensions");
}

}  // namespace

GrayFrame to_grayscale(const RawFrame& frame)
{
    check_raw(frame);
    GrayFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.pixels.resize(static_cast<size_t>(frame.width) * frame.height);
    for (size_t p = 0; p < out.pixels.size(); ++p) {
        const double r = frame.rgb[p * 3];
        const double g = frame.rgb[p * 3 + 1];
        const double b = frame.rgb[p * 3 + 2];
        // BT.601 luma, round half away from zero.
        out.pixels[p] = clamp_byte(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
    }
    return out;
}

GaussianKernel build_kernel(int size, double sigma)
{
    if (size < 3 || size % 2 == 0)
        throw std::invalid_argument("kernel size must be odd and >= 3");
    if (!(sigma > 0.0))
        throw std::invalid_argument("kernel sigma must be positive");

    GaussianKernel k;
    k.size = size;
    k.sigma = sigma;
    k.weights.resize(static_cast<size_t>(size) * size);
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            const double d2 = (i - c) * (i - c) + (j - c) * (j - c);
            const double w = std::exp(-d2 / (2.0 * sigma * sigma));
            k.weights[static_cast<size_t>(i) * size + j] = w;
            sum += w;
        }
    }
    for (double& w : k.weights)
        w /= sum;
    return k;
}

GrayFrame gaussian_smooth(const GrayFrame& frame, const GaussianKernel& kernel)
{
    check_gray(frame);
    const int half = kernel.size / 2;
    GrayFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.pixels.resize(frame.pixels.size());

    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < kernel.size; ++ky) {
                // Replicate edges so a constant frame stays constant.
                const int sy = std::clamp(y + ky - half, 0, frame.height - 1);
                for (int kx = 0; kx < kernel.size; ++kx) {
                    const int sx = std::clamp(x + kx - half, 0, frame.width - 1);
                    acc += kernel.at(ky, kx) * frame.at(sx, sy);
                }
            }
            out.pixels[static_cast<size_t>(y) * frame.width + x] = clamp_byte(std::lround(acc));
        }
    }
    return out;
}

GrayFrame preprocess(const RawFrame& frame, const GaussianKernel& kernel)
{
    return gaussian_smooth(to_grayscale(frame), kernel);
}

namespace {

struct ByteReader {
    const std::vector<std::uint8_t>& bytes;
    size_t pos = 0;

    int peek() const { return pos < bytes.size() ? bytes[pos] : -1; }
    int get() { return pos < bytes.size() ? bytes[pos++] : -1; }

    void skip_header_space()
    {
        for (;;) {
            int c = peek();
            if (c == '#') {
                while (c != -1 && c != '\n')
                    c = get();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                get();
            } else {
                return;
            }
        }
    }

    int read_int()
    {
        skip_header_space();
        if (!std::isdigit(peek()))
            throw std::runtime_error("malformed netpbm header");
        long v = 0;
        while (std::isdigit(peek())) {
            v = v * 10 + (get() - '0');
            if (v > 1000000)
                throw std::runtime_error("netpbm header value out of range");
        }
        return static_cast<int>(v);
    }
};

// Parses the common "magic w h maxval" header and returns the payload offset.
size_t parse_header(const std::vector<std::uint8_t>& bytes, const char* magic, int& w, int& h)
{
    ByteReader r{bytes};
    if (bytes.size() < 2 || bytes[0] != static_cast<std::uint8_t>(magic[0]) ||
        bytes[1] != static_cast<std::uint8_t>(magic[1]))
        throw std::runtime_error(std::string("unsupported netpbm format, expected ") + magic);
    r.pos = 2;
    w = r.read_int();
    h = r.read_int();
    const int maxval = r.read_int();
    if (w <= 0 || h <= 0)
        throw std::runtime_error("netpbm dimensions must be positive");
    if (maxval != 255)
        throw std::runtime_error("netpbm maxval must be 255");
    // Exactly one whitespace byte separates the header from the payload.
    const int sep = r.get();
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        throw std::runtime_error("malformed netpbm header");
    return r.pos;
}

}  // namespace

GrayFrame read_pgm(const std::vector<std::uint8_t>& bytes)
{
    int w = 0, h = 0;
    const size_t off = parse_header(bytes, "P5", w, h);
    const size_t need = static_cast<size_t>(w) * h;
    if (bytes.size() - off < need)
        throw std::runtime_error("PGM payload truncated");
    GrayFrame f;
    f.width = w;
    f.height = h;
    f.pixels.assign(bytes.begin() + off, bytes.begin() + off + need);
    return f;
}

std::vector<std::uint8_t> write_pgm(const GrayFrame& frame)
{
    check_gray(frame);
    std::string header = "P5\n" + std::to_string(frame.width) + " " +
                         std::to_string(frame.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

RawFrame read_ppm(const std::vector<std::uint8_t>& bytes)
{
    int w = 0, h = 0;
    const size_t off = parse_header(bytes, "P6", w, h);
    const size_t need = static_cast<size_t>(w) * h * 3;
    if (bytes.size() - off < need)
        throw std::runtime_error("PPM payload truncated");
    RawFrame f;
    f.width = w;
    f.height = h;
    f.rgb.assign(bytes.begin() + off, bytes.begin() + off + need);
    return f;
}

std::vector<std::uint8_t> write_ppm(const RawFrame& frame)
{
    check_raw(frame);
    std::string header = "P6\n" + std::to_string(frame.width) + " " +
                         std::to_string(frame.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), frame.rgb.begin(), frame.rgb.end());
    return out;
}

namespace {

void check_capture_size(int w, int h, const std::filesystem::path& path)
{
    if (w != kFrameWidth || h != kFrameHeight)
        throw std::runtime_error(path.string() + ": expected 160x120 frame, got " +
                                 std::to_string(w) + "x" + std::to_string(h));
}

}  // namespace

RawFrame load_ppm(const std::filesystem::path& path)
{
    RawFrame f = read_ppm(read_file(path));
    check_capture_size(f.width, f.height, path);
    return f;
}

GrayFrame load_pgm(const std::filesystem::path& path)
{
    GrayFrame f = read_pgm(read_file(path));
    check_capture_size(f.width, f.height, path);
    return f;
}

void save_ppm(const std::filesystem::path& path, const RawFrame& frame)
{
    atomic_write(path, write_ppm(frame));
}

void save_pgm(const std::filesystem::path& path, const GrayFrame& frame)
{
    atomic_write(path, write_pgm(frame));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void atomic_write(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void atomic_write(const std::filesystem::path& path, const std::string& text)
{
    atomic_write(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace tg
