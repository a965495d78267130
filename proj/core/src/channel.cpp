#include "mnulink/channel.hpp"

#include <stdexcept>

#include "mnulink/fft.hpp"
#include "mnulink/rng.hpp"

namespace mnulink {

cvec ChannelRealization::freq_response(int M) const {
    cvec padded(M, cd{0.0, 0.0});
    for (std::size_t m = 0; m < taps_.size() && m < static_cast<std::size_t>(M); ++m)
        padded[m] = taps_[m];
    return fft::forward(padded);
}

ChannelRealization draw_channel(std::mt19937_64& rng, int L) {
    if (L < 1) throw std::invalid_argument("tap count must be >= 1");
    cvec taps(L);
    const double per_tap = 1.0 / static_cast<double>(L);
    for (int m = 0; m < L; ++m) taps[m] = draw_cn(rng, per_tap);
    return ChannelRealization(std::move(taps));
}

ChannelRealization identity_channel() { return ChannelRealization(cvec{cd{1.0, 0.0}}); }

std::vector<ChannelRealization> draw_scenario_channels(const Scenario& scenario,
                                                       std::uint64_t trial) {
    std::vector<ChannelRealization> out;
    out.reserve(scenario.ues.size());
    for (const auto& u : scenario.ues) {
        const std::uint64_t t = scenario.experiment.fixed_channel ? 0 : trial;
        auto gen = substream(scenario.seed, 1, static_cast<std::uint64_t>(u.id), t);
        out.push_back(draw_channel(gen, scenario.channel.taps));
    }
    return out;
}

ComplexSignal received_signal(
    const std::vector<std::pair<const ComplexSignal*, const ChannelRealization*>>& tx,
    const NoiseSpec& noise, std::mt19937_64& rng) {
    if (tx.empty()) throw std::invalid_argument("received_signal: no inputs");
    const std::size_t span = tx.front().first->samples.size();
    const double rate = tx.front().first->sample_rate;
    for (const auto& [sig, chan] : tx) {
        (void)chan;
        if (sig->samples.size() != span)
            throw std::invalid_argument("received_signal: span mismatch");
    }

    ComplexSignal out;
    out.sample_rate = rate;
    out.samples.assign(span, cd{0.0, 0.0});
    for (const auto& [sig, chan] : tx) {
        const cvec& h = chan->taps();
        for (std::size_t m = 0; m < span; ++m) {
            cd acc{0.0, 0.0};
            const std::size_t tmax = std::min(h.size(), m + 1);
            for (std::size_t t = 0; t < tmax; ++t) acc += h[t] * sig->samples[m - t];
            out.samples[m] += acc;
        }
    }
    if (noise.variance > 0)
        for (std::size_t m = 0; m < span; ++m)
            out.samples[m] += draw_cn(rng, noise.variance);
    return out;
}

}  // namespace mnulink
