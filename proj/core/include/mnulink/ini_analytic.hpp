#pragma once

#include <map>

#include "mnulink/channel.hpp"
#include "mnulink/common.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/receiver.hpp"
#include "mnulink/waveform.hpp"

namespace mnulink {

/// Finite geometric sum of complex exponentials:
///   sum_{m=0}^{L-1} e^{j2pi theta m} = e^{j pi theta (L-1)} sin(pi theta L)/sin(pi theta).
/// The removable singularity at integer theta is resolved by falling back to
/// the explicit sum when |sin(pi theta)| < 1e-9.
cd dirichlet_ratio(double theta, long long L);

/// Helper quantities for the interference kernels. Index l runs over the
/// interferer's active subcarriers (0-based within its band), k over the
/// victim's M-grid.
struct HelperQuantities {
    long long nu_l = 0;       // l + M_j - N_j
    long long nu_q = 0;       // segment boundary; q*(M_j+tau_j) when alpha>1,
                              // q*(M_i+tau_i) when alpha<1
    double kappa = 0;         // l/M_j + (N_i - k)/M_i
    double zeta = 0;          // l/M_j - k/M_i
    long long V_q = 0;        // samples of segment q inside the receiver window
    long long tau_alpha = 0;  // (1/alpha - 1)*tau_cp,i for alpha<1, else 0
};
HelperQuantities helper_quantities(int l, int k, int q, const UeNumerology& cfg_i,
                                   const UeNumerology& cfg_j);

/// Interference kernel for a higher-numerology interferer (alpha_{i,j} > 1):
/// the Dirichlet sum of length V_q at ratio kappa_{l,k}.
cd q_high(int l, int k, int q, const UeNumerology& cfg_i, const UeNumerology& cfg_j);

/// Interference kernel for a lower-numerology interferer (alpha_{i,j} < 1),
/// with the q=1 two-part split (CP tail + body head) and the q>1 full-window
/// form.
cd q_low(int l, int k, int q, const UeNumerology& cfg_i, const UeNumerology& cfg_j);

/// Per-victim interference coefficient table. Each term carries the complex
/// coefficient (per victim demapped subcarrier n, i.e. at the receiver FFT
/// output before despreading) multiplying X_j(grid_index) * H_j(grid_index)
/// for one (interferer, segment, source subcarrier) triple.
/// For higher-numerology interferers the segment indexes the alpha interferer
/// symbols inside one victim symbol (weight 1); for lower-numerology
/// interferers it indexes the 1/alpha victim positions inside one interferer
/// symbol (weight alpha, i.e. the positions are averaged in expectation).
/// Coefficients are independent of channel, data and power.
struct IniCoefficients {
    struct Term {
        int ue = 0;         // interferer id
        bool higher = false;
        int segment = 0;    // q, 1-based
        int grid_index = 0; // subcarrier on the interferer's own M-grid
        double weight = 1.0;
        cvec per_n;         // length N_victim
    };
    int victim = 0;
    std::vector<Term> terms;
};

IniCoefficients build_ini_coefficients(const Scenario& scenario, int victim);

/// Per-segment interferer data: for each UE id, one FreqGrid per segment
/// (higher interferers: alpha grids; lower interferers and the victim: one).
using SegmentData = std::map<int, std::vector<FreqGrid>>;

/// I_{h,i}(n): total INI amplitude at the victim's n-th demapped subcarrier
/// from all higher-numerology interferers, given explicit data and channels
/// (channels ordered like scenario.ues).
cd ini_high(int n, int victim, const Scenario& scenario,
            const std::vector<ChannelRealization>& channels, const SegmentData& data,
            const IniCoefficients& coeffs);

/// I_{l,i}(n): contribution of all lower-numerology interferers for the
/// victim symbol at position victim_slot (0-based) inside the longest frame.
cd ini_low(int n, int victim, const Scenario& scenario,
           const std::vector<ChannelRealization>& channels, const SegmentData& data,
           const IniCoefficients& coeffs, int victim_slot = 0);

/// I_i(n) = I_{h,i}(n) + I_{l,i}(n).
cd total_ini(int n, int victim, const Scenario& scenario,
             const std::vector<ChannelRealization>& channels, const SegmentData& data,
             const IniCoefficients& coeffs, int victim_slot = 0);

/// Closed-form E|I_i(n)|^2 for i.i.d. unit-power modulation data scaled by
/// the per-UE powers; no Monte-Carlo. Lower-numerology positions are
/// averaged, matching the measurement oracle's position cycling.
std::vector<double> expected_ini_power(const Scenario& scenario, int victim,
                                       const std::vector<ChannelRealization>& channels,
                                       const std::vector<double>& powers,
                                       const IniCoefficients* cached = nullptr);

/// Convenience wrapper returning an analytic IniProfile at the scenario's
/// resolved powers.
IniProfile analytic_ini_profile(const Scenario& scenario, int victim,
                                const std::vector<ChannelRealization>& channels);

/// Linear decomposition of the expected INI power: p_I,victim(n) =
/// sum_j gain[j][n] * p_x,j (gain rows ordered like scenario.ues; victim and
/// same-numerology rows are zero). Reused across optimizer iterations.
struct IniGainTable {
    int victim = 0;
    std::vector<std::vector<double>> gain;
};
IniGainTable ini_gain_table(const Scenario& scenario, int victim,
                            const std::vector<ChannelRealization>& channels,
                            const IniCoefficients* cached = nullptr);

}  // namespace mnulink
