#pragma once

#include "mnulink/channel.hpp"
#include "mnulink/common.hpp"
#include "mnulink/ini_analytic.hpp"
#include "mnulink/numerology.hpp"

namespace mnulink {

struct PowerAllocation {
    std::vector<double> per_ue;  // [W], one entry per UE in scenario order
};

/// Parameters of the spectral-efficiency model. desired_gain[i][n] is the
/// per-(UE, subcarrier) channel gain g_i(n) so that p_d,i(n) = p_x,i * g_i(n).
struct SeModel {
    double p_out = 0.0;
    double sigma2 = 1e-3;
    std::vector<double> se_floors;                  // empty = all zero
    std::vector<std::vector<double>> desired_gain;  // [ue index][n]
    // Noise power per UE at the demap plane (M_i sigma2 under the
    // unnormalized receiver FFT). Empty = fall back to the raw sigma2.
    std::vector<double> noise;

    double noise_at(std::size_t ue_index) const {
        return noise.empty() ? sigma2 : noise.at(ue_index);
    }
};

/// Default model from a scenario and fixed channels: g_i(n) = N_i |H_i|^2 at
/// UE i's n-th active subcarrier (the spread puts power N_i p on each
/// demapped subcarrier, the reference plane shared with the INI tables).
SeModel make_se_model(const Scenario& scenario,
                      const std::vector<ChannelRealization>& channels);

/// (1 - P_out) log2(1 + p_d / (p_I + sigma^2)).
double spectral_efficiency(double p_d, double p_I, const SeModel& model);

/// Minimum over all UEs and all active subcarriers.
double lambda_objective(const std::vector<std::vector<double>>& se);

/// Full SE matrix (per UE, per active subcarrier) at the given powers, with
/// p_I from the precomputed per-victim gain tables (one table per UE, in
/// scenario order).
std::vector<std::vector<double>> se_matrix(const Scenario& scenario,
                                           const std::vector<IniGainTable>& tables,
                                           const SeModel& model,
                                           const std::vector<double>& powers);

/// Affine overestimator of S_e,sub = log2(p_I + sigma^2) at the local point:
/// bound(p) = upsilon + gradient . (p - p_hat). With full_gradient the
/// linearization runs over the whole power vector (p_I depends on the
/// interferers' powers); the own-power single partial is available with
/// full_gradient = false.
struct TaylorBound {
    double upsilon = 0.0;
    std::vector<double> gradient;
    std::vector<double> p_hat;
    double operator()(const std::vector<double>& p) const;
};
TaylorBound taylor_upper_bound(const PowerAllocation& p_hat, int victim_index, int n,
                               const std::vector<IniGainTable>& tables,
                               const SeModel& model, bool full_gradient = true);

struct OptimizerState {
    int iterate = 0;
    PowerAllocation p_hat;
    std::vector<double> lambda_history;
    std::vector<int> M;  // current numerology assignment
    bool converged = false;
};

struct ScaOptions {
    bool full_gradient = true;
    double subproblem_tol = 1e-5;
    double convergence_tol = 1e-4;
    int max_iterations = 100;
    double floor_penalty = 10.0;
};

/// One convexified max-min subproblem solved by monotone pattern search over
/// the box [0, p_max]^K. The returned point's surrogate objective is
/// certified >= the surrogate objective at state.p_hat.
PowerAllocation sca_power_step(const OptimizerState& state, const Scenario& scenario,
                               const std::vector<IniGainTable>& tables,
                               const SeModel& model, const ScaOptions& opts = {});

struct OptResult {
    PowerAllocation p;
    double lambda = 0.0;
    std::vector<double> trace;  // accepted-iterate Lambda history, non-decreasing
    int iterations = 0;
    bool feasible = true;
    std::vector<int> infeasible_ues;  // UEs whose SE floor is violated at the optimum
};

/// Successive convex approximation from the given start point, with the
/// uniform p_max allocation always compared as a candidate.
OptResult optimize_power(const Scenario& scenario, const std::vector<IniGainTable>& tables,
                         const SeModel& model, const PowerAllocation& init,
                         const ScaOptions& opts = {});

struct CandidateResult {
    std::vector<int> mu;
    double lambda = 0.0;
    OptResult result;
};

struct NumerologySelection {
    std::vector<int> mu;
    OptResult result;
    Scenario scenario;  // rebuilt at the winning assignment
    std::vector<CandidateResult> candidates;
};

/// Exhaustive search over feasible mu assignments (per-UE candidate sets from
/// the scenario; an empty set means all of {6..10}), keeping bandwidth
/// fractions and the shared sample rate fixed. Ties break toward the smallest
/// sum of mu, then lexicographically. Throws std::runtime_error when no
/// candidate assignment is feasible.
NumerologySelection select_numerology(const Scenario& templ, const ScaOptions& opts = {});

}  // namespace mnulink
