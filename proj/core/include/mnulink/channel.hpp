#pragma once

#include <map>
#include <random>

#include "mnulink/common.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/waveform.hpp"

namespace mnulink {

/// One Rayleigh multipath realization. E[sum |taps|^2] = 1 under the uniform
/// power-delay profile.
class ChannelRealization {
  public:
    ChannelRealization() = default;
    explicit ChannelRealization(cvec taps) : taps_(std::move(taps)) {}

    const cvec& taps() const { return taps_; }

    /// H(k) = sum_m taps(m) e^{-j2pi mk/M} on an M-point grid.
    cvec freq_response(int M) const;

  private:
    cvec taps_;
};

struct NoiseSpec {
    double variance = 0.0;
};

/// i.i.d. CN(0, 1/L) taps; L >= 1.
ChannelRealization draw_channel(std::mt19937_64& rng, int L);

/// Flat unit channel (single tap = 1).
ChannelRealization identity_channel();

/// Per-UE channels for a scenario, ordered like scenario.ues. With
/// experiment.fixed_channel the draw ignores the trial index, so every trial
/// conditions on the same realization.
std::vector<ChannelRealization> draw_scenario_channels(const Scenario& scenario,
                                                       std::uint64_t trial = 0);

/// Linear convolution truncated to the common frame span, summed over UEs,
/// plus AWGN of the given variance. Throws on span mismatch.
ComplexSignal received_signal(
    const std::vector<std::pair<const ComplexSignal*, const ChannelRealization*>>& tx,
    const NoiseSpec& noise, std::mt19937_64& rng);

}  // namespace mnulink
