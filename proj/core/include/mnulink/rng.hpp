#pragma once

#include <cstdint>
#include <random>

#include "mnulink/common.hpp"

namespace mnulink {

/// splitmix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic substream: generator seeded from (seed, a, b, c).
/// Results are a pure function of the arguments, so work can be partitioned
/// across threads by index without changing any draw.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
cd draw_cn(std::mt19937_64& gen, double variance);

}  // namespace mnulink
