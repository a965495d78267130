#include "mnulink/rng.hpp"

#include <cmath>

namespace mnulink {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(a + 0x123456789abcdefULL));
    s = mix64(s ^ mix64(b + 0xfedcba9876543210ULL));
    s = mix64(s ^ mix64(c + 0x0f0f0f0f0f0f0f0fULL));
    return std::mt19937_64(s);
}

cd draw_cn(std::mt19937_64& gen, double variance) {
    // Box-Muller keeps the draw count fixed at two uniforms per sample,
    // independent of the standard library's normal_distribution internals.
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u1 = uni(gen);
    double u2 = uni(gen);
    if (u1 <= 0.0) u1 = 1e-300;
    const double r = std::sqrt(-variance * std::log(u1));
    const double phi = 2.0 * kPi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace mnulink
