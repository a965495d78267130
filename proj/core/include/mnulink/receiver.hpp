#pragma once

#include <cstdint>

#include "mnulink/channel.hpp"
#include "mnulink/common.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/waveform.hpp"

namespace mnulink {

struct ReceivedGrid {
    cvec values;  // M entries
    int victim = 0;
};

struct RecoveredSymbols {
    cvec values;  // N entries
    int victim = 0;
};

struct IniProfile {
    enum class Kind { measured, analytic };
    std::vector<double> per_subcarrier;  // linear power, length N
    int victim = 0;
    Kind kind = Kind::measured;
};

/// CP removal followed by an unnormalized M-point forward DFT over the
/// symbol body. Input length must be M + tau_cp.
ReceivedGrid demodulate_symbol(const ComplexSignal& r, const UeNumerology& cfg);

/// Demaps the N active entries and applies the (1/N)-scaled inverse DFT.
RecoveredSymbols recover_symbols(const ReceivedGrid& R, const UeNumerology& cfg);

/// Differential Monte-Carlo INI oracle: per trial, all-UE random data and one
/// channel set are run through the chain twice (interferers active /
/// silenced) with identical randomness and sigma^2 = 0; the per-subcarrier
/// average of |difference|^2 of the demapped grids over trials is returned.
/// The difference is taken at the receiver FFT output (before despreading),
/// matching the analytic profile's reference plane.
///
/// The victim symbol position inside the longest co-scheduled frame cycles
/// deterministically with the trial index, so lower-numerology interferers
/// are observed at every relative offset. Trials are partitioned into
/// fixed-size blocks merged in block order: the result is a pure function of
/// (scenario, victim, trials, seed), independent of the thread count.
IniProfile measure_ini(const Scenario& scenario, int victim, int trials,
                       std::uint64_t seed, int threads = 1);

/// One trial's per-subcarrier INI sample (the complex difference of the
/// demapped grids over the victim's band). Exposed for tests and
/// amplitude-level cross-checks.
cvec ini_trial_sample(const Scenario& scenario, int victim, std::uint64_t seed,
                      std::uint64_t trial);

}  // namespace mnulink
