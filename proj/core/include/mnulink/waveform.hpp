#pragma once

#include "mnulink/common.hpp"
#include "mnulink/numerology.hpp"

namespace mnulink {

/// Complex modulation symbols with unit average constellation power.
struct ModSymbols {
    cvec values;
    int order = 0;
};

/// One UE's M-point frequency grid; entries outside the active band are zero.
struct FreqGrid {
    cvec values;
    int owner = 0;
};

struct ComplexSignal {
    cvec samples;
    double sample_rate = 0.0;
};

/// Gray-mapped square QAM, order in {4, 16, 64}, scaled to exactly unit
/// average constellation power. Throws std::invalid_argument on a bad order
/// or an index out of range.
ModSymbols modulate(const std::vector<int>& symbol_indices, int order);

/// Full normalized constellation, in index order (used by tests and the
/// random data generators).
cvec constellation(int order);

/// Unnormalized forward DFT of size N: S(k) = sum_n x(n) e^{-j2pi nk/N}.
/// Throws on length mismatch.
cvec dft_spread(const ModSymbols& x, int N);

/// Localized mapping: X(band_offset + t) = S(t); all other entries zero.
FreqGrid map_subcarriers(const cvec& spread, const UeNumerology& cfg);

/// (1/M)-scaled inverse DFT of the grid with a cyclic prefix of tau_cp
/// samples prepended; output length M + tau_cp.
ComplexSignal synthesize_symbol(const FreqGrid& grid, const UeNumerology& cfg);

/// Frame alignment across numerologies.
/// alpha = M_victim/M_j >= 1: concatenates alpha CP-prefixed UE-j symbols
/// into exactly one victim symbol span (M_victim + tau_cp,victim samples).
/// alpha < 1: takes exactly one UE-j symbol and returns its full span; the
/// caller slices 1/alpha victim-symbol spans out of it.
ComplexSignal build_aligned_frame(const UeNumerology& cfg_j,
                                  const std::vector<FreqGrid>& symbols,
                                  const UeNumerology& victim_cfg);

}  // namespace mnulink
