#include "mnulink/receiver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mnulink/fft.hpp"
#include "mnulink/rng.hpp"

namespace mnulink {

ReceivedGrid demodulate_symbol(const ComplexSignal& r, const UeNumerology& cfg) {
    if (static_cast<int>(r.samples.size()) != cfg.symbol_span())
        throw std::invalid_argument("demodulate_symbol: input length != M + tau_cp");
    cvec body(r.samples.begin() + cfg.tau_cp, r.samples.end());
    ReceivedGrid grid;
    grid.victim = cfg.id;
    grid.values = fft::forward(body);
    return grid;
}

RecoveredSymbols recover_symbols(const ReceivedGrid& R, const UeNumerology& cfg) {
    if (static_cast<int>(R.values.size()) != cfg.M)
        throw std::invalid_argument("recover_symbols: grid length != M");
    cvec active(R.values.begin() + cfg.band_offset,
                R.values.begin() + cfg.band_offset + cfg.N);
    RecoveredSymbols out;
    out.victim = cfg.id;
    out.values = fft::inverse(active);
    return out;
}

namespace {

// RNG stream tags: 1 = channel (see channel.cpp), 2 = data.
constexpr std::uint64_t kDataTag = 2;

std::vector<int> random_qam_indices(std::mt19937_64& gen, int count, int order) {
    // order is a power of two, so the modulo is exactly uniform.
    std::vector<int> idx(count);
    for (int& v : idx) v = static_cast<int>(gen() % static_cast<std::uint64_t>(order));
    return idx;
}

// One UE's convolved contribution to the victim span [span_start, span_start + span).
// Symbols are generated from the start of the UE symbol containing span_start so
// linear convolution sees the correct in-frame history; the initial transient
// falls inside the victim CP (guaranteed by CP sufficiency) and is discarded.
cvec ue_contribution(const Scenario& s, const UeNumerology& u, double power,
                     const ChannelRealization& chan, long long span_start, int span,
                     std::uint64_t seed, std::uint64_t trial) {
    const long long Vu = u.symbol_span();
    const long long gen_start = (span_start / Vu) * Vu;
    const long long needed = span_start + span - gen_start;
    const int n_syms = static_cast<int>((needed + Vu - 1) / Vu);

    const double amp = std::sqrt(power);
    cvec signal;
    signal.reserve(static_cast<std::size_t>(n_syms) * Vu);
    for (int k = 0; k < n_syms; ++k) {
        auto gen = substream(seed, kDataTag,
                             static_cast<std::uint64_t>(u.id) * 1000003ULL +
                                 static_cast<std::uint64_t>(k),
                             trial);
        ModSymbols mod = modulate(random_qam_indices(gen, u.N, s.qam_order), s.qam_order);
        for (cd& v : mod.values) v *= amp;
        const FreqGrid grid = map_subcarriers(dft_spread(mod, u.N), u);
        const ComplexSignal sym = synthesize_symbol(grid, u);
        signal.insert(signal.end(), sym.samples.begin(), sym.samples.end());
    }

    // Linear convolution, then slice the victim span.
    const cvec& h = chan.taps();
    cvec out(span, cd{0.0, 0.0});
    const long long base = span_start - gen_start;
    for (int m = 0; m < span; ++m) {
        const long long pos = base + m;
        cd acc{0.0, 0.0};
        const long long tmax = std::min<long long>(static_cast<long long>(h.size()), pos + 1);
        for (long long t = 0; t < tmax; ++t) acc += h[t] * signal[pos - t];
        out[m] = acc;
    }
    return out;
}

}  // namespace

cvec ini_trial_sample(const Scenario& s, int victim, std::uint64_t seed,
                      std::uint64_t trial) {
    const UeNumerology& vic = s.ue(victim);
    const int Vi = vic.symbol_span();
    long long Vmax = Vi;
    for (const auto& u : s.ues) Vmax = std::max<long long>(Vmax, u.symbol_span());
    const long long slots = Vmax / Vi;
    const long long sv = static_cast<long long>(trial % static_cast<std::uint64_t>(slots));
    const long long span_start = sv * Vi;

    const std::vector<double> powers = s.resolved_powers();
    const std::vector<ChannelRealization> chans = draw_scenario_channels(s, trial);

    cvec r_all(Vi, cd{0.0, 0.0});
    cvec r_vic(Vi, cd{0.0, 0.0});
    for (std::size_t ui = 0; ui < s.ues.size(); ++ui) {
        const UeNumerology& u = s.ues[ui];
        cvec contrib = ue_contribution(s, u, powers[ui], chans[ui], span_start, Vi,
                                       seed, trial);
        for (int m = 0; m < Vi; ++m) r_all[m] += contrib[m];
        if (u.id == victim)
            for (int m = 0; m < Vi; ++m) r_vic[m] += contrib[m];
    }

    ComplexSignal all{std::move(r_all), s.sample_rate};
    ComplexSignal only{std::move(r_vic), s.sample_rate};
    // The INI sample is read at the demap output (post-FFT subcarriers),
    // before the despreading IDFT: that is where the per-subcarrier profile
    // is defined, and where edge concentration is visible.
    const ReceivedGrid with_ini = demodulate_symbol(all, vic);
    const ReceivedGrid without = demodulate_symbol(only, vic);

    cvec diff(vic.N);
    for (int n = 0; n < vic.N; ++n)
        diff[n] = with_ini.values[vic.band_offset + n] - without.values[vic.band_offset + n];
    return diff;
}

IniProfile measure_ini(const Scenario& s, int victim, int trials, std::uint64_t seed,
                       int threads) {
    if (trials < 1) throw std::invalid_argument("measure_ini: trials must be >= 1");
    const auto errs = validate_scenario(s);
    if (!errs.empty())
        throw std::invalid_argument("measure_ini: invalid scenario: " +
                                    describe(errs.front()));
    const UeNumerology& vic = s.ue(victim);

    constexpr int kBlock = 32;
    const int n_blocks = (trials + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partials(n_blocks);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= n_blocks) return;
            std::vector<double> acc(vic.N, 0.0);
            const int begin = b * kBlock;
            const int end = std::min(trials, begin + kBlock);
            for (int t = begin; t < end; ++t) {
                const cvec diff = ini_trial_sample(s, victim, seed,
                                                  static_cast<std::uint64_t>(t));
                for (int n = 0; n < vic.N; ++n) acc[n] += std::norm(diff[n]);
            }
            partials[b] = std::move(acc);
        }
    };

    const int n_threads = std::max(1, std::min(threads, n_blocks));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    IniProfile profile;
    profile.victim = victim;
    profile.kind = IniProfile::Kind::measured;
    profile.per_subcarrier.assign(vic.N, 0.0);
    for (int b = 0; b < n_blocks; ++b)
        for (int n = 0; n < vic.N; ++n)
            profile.per_subcarrier[n] += partials[b][n];
    for (double& v : profile.per_subcarrier) v /= static_cast<double>(trials);
    return profile;
}

}  // namespace mnulink
