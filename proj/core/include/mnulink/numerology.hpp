#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnulink/common.hpp"

namespace mnulink {

/// One UE's frame parameters. Immutable after Scenario construction.
struct UeNumerology {
    int id = 0;           // 1-based UE index
    int mu = 0;           // M = 2^mu, mu in {6..10}
    int M = 0;            // IFFT order / total subcarriers
    int N = 0;            // active subcarriers
    int Nz = 0;           // zero-padded subcarriers, M = N + Nz
    int tau_cp = 0;       // CP length in samples, M/16
    double delta_f = 0;   // subcarrier spacing [Hz]
    int band_offset = 0;  // first active subcarrier on this UE's own M-grid

    int symbol_span() const { return M + tau_cp; }
};

struct UserPartition {
    int victim = 0;
    std::vector<int> higher;  // alpha_{victim,j} > 1
    std::vector<int> lower;   // alpha_{victim,j} < 1
    std::vector<int> same;    // alpha_{victim,j} = 1, j != victim
};

struct ChannelSpec {
    int taps = 4;  // uniform power-delay profile length L
};

enum class PowerMode { uniform, optimized, explicit_list };

struct ExperimentSpec {
    int trials = 2000;
    bool fixed_channel = true;
};

struct Scenario {
    std::vector<UeNumerology> ues;
    ChannelSpec channel;
    double sigma2 = 0.0;               // noise variance (linear)
    double p_max = 0.1;                // max per-UE subcarrier power [W]
    PowerMode power_mode = PowerMode::uniform;
    std::vector<double> explicit_powers;  // [W], used when power_mode == explicit_list
    double p_out = 0.0;                // outage probability
    std::vector<double> se_floors;     // lambda_i per UE (empty = all zero)
    int qam_order = 64;
    std::uint64_t seed = 42;
    ExperimentSpec experiment;
    double sample_rate = 0.0;          // M_i * delta_f_i, common across UEs

    // Optional per-UE candidate mu sets for numerology selection (empty =
    // the UE's numerology is held fixed).
    std::vector<std::vector<int>> mu_candidates;

    const UeNumerology& ue(int id) const;
    std::vector<double> resolved_powers() const;  // per-UE transmit powers [W]
};

/// Per-UE scenario input before the band layout is derived.
struct UeSpec {
    int mu = 0;
    int n_active = 0;
    std::optional<double> delta_f_hz;
    std::vector<int> mu_candidates;
};

struct ValidationError {
    int ue_id = 0;  // 0 = scenario-level
    std::string message;
};

/// alpha_{i,j} = M_i / M_j; exact for power-of-two orders.
double scaling_factor(const UeNumerology& cfg_i, const UeNumerology& cfg_j);

/// Splits K \ {victim} into higher/lower/same numerology sets.
/// Throws std::invalid_argument for an unknown victim id.
UserPartition partition_users(int victim, const Scenario& scenario);

/// Checks every UeNumerology invariant, the exact sum N_i/M_i = 1 (rational
/// arithmetic), contiguous non-overlapping bands, the common sample rate, and
/// CP sufficiency against the channel tap count.
std::vector<ValidationError> validate_scenario(const Scenario& scenario);

/// Derives M, Nz, tau_cp, delta_f and contiguous band offsets (ascending UE id
/// from the bottom of the shared bandwidth) from per-UE (mu, n_active).
/// Structural violations are left for validate_scenario to report.
Scenario make_scenario(const std::vector<UeSpec>& ues);

std::string describe(const ValidationError& err);

}  // namespace mnulink
