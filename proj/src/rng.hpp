#pragma once

#include <cmath>
#include <cstdint>

namespace tg {

// Fixed, portable generators so synthetic output is byte-identical everywhere.
// std::mt19937 distributions are implementation-defined, so they are avoided.

inline std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// PCG32 (XSH RR variant).
class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream)
    {
        inc_ = (stream << 1) | 1u;
        state_ = 0;
        next();
        state_ += seed;
        next();
    }

    std::uint32_t next()
    {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59);
        return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
    }

    // Uniform in (0,1); never returns 0 so it is safe under log().
    double uniform()
    {
        return (static_cast<double>(next()) + 0.5) * (1.0 / 4294967296.0);
    }

    // Standard normal via Box-Muller; one value per call, pair cached.
    double gaussian()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tg
