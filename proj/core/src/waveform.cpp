#include "mnulink/waveform.hpp"

#include <cmath>
#include <stdexcept>

#include "mnulink/fft.hpp"

namespace mnulink {

namespace {

// Gray code per axis; symbol index = (i_bits << side_bits) | q_bits.
int gray(int x) { return x ^ (x >> 1); }

int side_of(int order) {
    switch (order) {
        case 4: return 2;
        case 16: return 4;
        case 64: return 8;
        default: throw std::invalid_argument("QAM order must be 4, 16 or 64");
    }
}

}  // namespace

cvec constellation(int order) {
    const int side = side_of(order);
    // Levels +-1, +-3, ..., +-(side-1); average power 2*(side^2-1)/3.
    const double norm = std::sqrt(3.0 / (2.0 * (side * side - 1)));
    std::vector<double> level(side);
    for (int g = 0; g < side; ++g) level[g] = (2.0 * g - (side - 1)) * norm;

    // axis[gray(pos)] = level[pos] so adjacent levels differ in one bit.
    std::vector<double> axis(side);
    for (int pos = 0; pos < side; ++pos) axis[gray(pos)] = level[pos];

    int side_bits = 0;
    while ((1 << side_bits) < side) ++side_bits;

    cvec points(order);
    for (int idx = 0; idx < order; ++idx) {
        const int ib = idx >> side_bits;
        const int qb = idx & (side - 1);
        points[idx] = {axis[ib], axis[qb]};
    }
    return points;
}

ModSymbols modulate(const std::vector<int>& symbol_indices, int order) {
    const cvec points = constellation(order);
    ModSymbols out;
    out.order = order;
    out.values.reserve(symbol_indices.size());
    for (int idx : symbol_indices) {
        if (idx < 0 || idx >= order)
            throw std::invalid_argument("symbol index " + std::to_string(idx) +
                                        " out of range for order " + std::to_string(order));
        out.values.push_back(points[idx]);
    }
    return out;
}

cvec dft_spread(const ModSymbols& x, int N) {
    if (static_cast<int>(x.values.size()) != N)
        throw std::invalid_argument("dft_spread: expected " + std::to_string(N) +
                                    " symbols, got " + std::to_string(x.values.size()));
    return fft::forward(x.values);
}

FreqGrid map_subcarriers(const cvec& spread, const UeNumerology& cfg) {
    if (static_cast<int>(spread.size()) != cfg.N)
        throw std::invalid_argument("map_subcarriers: spread length != N");
    FreqGrid grid;
    grid.owner = cfg.id;
    grid.values.assign(cfg.M, cd{0.0, 0.0});
    for (int t = 0; t < cfg.N; ++t) grid.values[cfg.band_offset + t] = spread[t];
    return grid;
}

ComplexSignal synthesize_symbol(const FreqGrid& grid, const UeNumerology& cfg) {
    if (static_cast<int>(grid.values.size()) != cfg.M)
        throw std::invalid_argument("synthesize_symbol: grid length != M");
    const cvec body = fft::inverse(grid.values);
    ComplexSignal out;
    out.sample_rate = static_cast<double>(cfg.M) * cfg.delta_f;
    out.samples.reserve(cfg.M + cfg.tau_cp);
    out.samples.insert(out.samples.end(), body.end() - cfg.tau_cp, body.end());
    out.samples.insert(out.samples.end(), body.begin(), body.end());
    return out;
}

ComplexSignal build_aligned_frame(const UeNumerology& cfg_j,
                                  const std::vector<FreqGrid>& symbols,
                                  const UeNumerology& victim_cfg) {
    const double alpha = scaling_factor(victim_cfg, cfg_j);
    const std::size_t want = alpha >= 1.0 ? static_cast<std::size_t>(alpha) : 1;
    if (symbols.size() != want)
        throw std::invalid_argument("build_aligned_frame: expected " +
                                    std::to_string(want) + " symbols, got " +
                                    std::to_string(symbols.size()));
    ComplexSignal out;
    out.sample_rate = static_cast<double>(cfg_j.M) * cfg_j.delta_f;
    for (const FreqGrid& g : symbols) {
        const ComplexSignal sym = synthesize_symbol(g, cfg_j);
        out.samples.insert(out.samples.end(), sym.samples.begin(), sym.samples.end());
    }
    return out;
}

}  // namespace mnulink
