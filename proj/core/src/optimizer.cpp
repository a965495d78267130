#include "mnulink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mnulink {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double ini_power_at(const IniGainTable& table, int n, const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) acc += table.gain[j][n] * p[j];
    return acc;
}

}  // namespace

SeModel make_se_model(const Scenario& s, const std::vector<ChannelRealization>& channels) {
    SeModel model;
    model.p_out = s.p_out;
    model.sigma2 = s.sigma2;
    model.se_floors = s.se_floors.empty() ? std::vector<double>(s.ues.size(), 0.0)
                                          : s.se_floors;
    model.desired_gain.resize(s.ues.size());
    model.noise.resize(s.ues.size());
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        const UeNumerology& u = s.ues[i];
        const cvec H = channels.at(i).freq_response(u.M);
        model.desired_gain[i].resize(u.N);
        // The unnormalized DFT spread puts power N_i p on each demapped
        // subcarrier, so the desired gain carries the factor N_i; this keeps
        // p_d on the same reference plane as the interference gain tables.
        for (int n = 0; n < u.N; ++n)
            model.desired_gain[i][n] =
                static_cast<double>(u.N) * std::norm(H[u.band_offset + n]);
        model.noise[i] = static_cast<double>(u.M) * s.sigma2;
    }
    return model;
}

double spectral_efficiency(double p_d, double p_I, const SeModel& model) {
    return (1.0 - model.p_out) * std::log2(1.0 + p_d / (p_I + model.sigma2));
}

double lambda_objective(const std::vector<std::vector<double>>& se) {
    if (se.empty()) throw std::invalid_argument("lambda_objective: empty SE matrix");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : se)
        for (double v : row) best = std::min(best, v);
    return best;
}

std::vector<std::vector<double>> se_matrix(const Scenario& s,
                                           const std::vector<IniGainTable>& tables,
                                           const SeModel& model,
                                           const std::vector<double>& powers) {
    std::vector<std::vector<double>> se(s.ues.size());
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        const int N = s.ues[i].N;
        se[i].resize(N);
        const double noise = model.noise_at(i);
        for (int n = 0; n < N; ++n) {
            const double p_I = ini_power_at(tables[i], n, powers);
            const double p_d = powers[i] * model.desired_gain[i][n];
            se[i][n] =
                (1.0 - model.p_out) * std::log2(1.0 + p_d / (p_I + noise));
        }
    }
    return se;
}

double TaylorBound::operator()(const std::vector<double>& p) const {
    double acc = upsilon;
    for (std::size_t j = 0; j < p.size(); ++j) acc += gradient[j] * (p[j] - p_hat[j]);
    return acc;
}

TaylorBound taylor_upper_bound(const PowerAllocation& p_hat, int victim_index, int n,
                               const std::vector<IniGainTable>& tables,
                               const SeModel& model, bool full_gradient) {
    const IniGainTable& table = tables.at(victim_index);
    const double p_I = ini_power_at(table, n, p_hat.per_ue);
    const double noise = model.noise_at(static_cast<std::size_t>(victim_index));
    TaylorBound bound;
    bound.p_hat = p_hat.per_ue;
    bound.upsilon = std::log2(p_I + noise);
    bound.gradient.assign(p_hat.per_ue.size(), 0.0);
    if (full_gradient) {
        for (std::size_t j = 0; j < p_hat.per_ue.size(); ++j)
            bound.gradient[j] = table.gain[j][n] / ((p_I + noise) * kLn2);
    } else {
        // Own-power partial only; p_I,i carries no p_x,i term, so this is 0.
        bound.gradient[victim_index] =
            table.gain[victim_index][n] / ((p_I + noise) * kLn2);
    }
    return bound;
}

namespace {

// Precomputed convexified subproblem at a local point.
struct Subproblem {
    const Scenario* scenario;
    const std::vector<IniGainTable>* tables;
    const SeModel* model;
    std::vector<std::vector<TaylorBound>> bounds;  // [ue][n]
    double floor_penalty;

    // min over (i,n) of the surrogate SE, with violated floors pulled down by
    // the exact penalty (1+gamma)s - gamma*lambda_i (concave, inactive when
    // the floor holds).
    double objective(const std::vector<double>& p) const {
        double worst = std::numeric_limits<double>::infinity();
        const double pre = 1.0 - model->p_out;
        for (std::size_t i = 0; i < scenario->ues.size(); ++i) {
            const int N = scenario->ues[i].N;
            const double floor = model->se_floors[i];
            const double noise = model->noise_at(i);
            for (int n = 0; n < N; ++n) {
                const double p_I = ini_power_at((*tables)[i], n, p);
                const double p_d = p[i] * model->desired_gain[i][n];
                const double s =
                    pre * (std::log2(p_I + noise + p_d) - bounds[i][n](p));
                worst = std::min(worst, s);
                if (floor > 0.0)
                    worst = std::min(worst, s + floor_penalty * (s - floor));
            }
        }
        return worst;
    }
};

}  // namespace

PowerAllocation sca_power_step(const OptimizerState& state, const Scenario& s,
                               const std::vector<IniGainTable>& tables,
                               const SeModel& model, const ScaOptions& opts) {
    const std::size_t K = s.ues.size();
    Subproblem sub{&s, &tables, &model, {}, opts.floor_penalty};
    sub.bounds.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
        sub.bounds[i].reserve(s.ues[i].N);
        for (int n = 0; n < s.ues[i].N; ++n)
            sub.bounds[i].push_back(taylor_upper_bound(state.p_hat, static_cast<int>(i),
                                                       n, tables, model,
                                                       opts.full_gradient));
    }

    // Monotone coordinate pattern search over the box; the subproblem is
    // concave, so this converges to its maximum.
    std::vector<double> p = state.p_hat.per_ue;
    for (double& v : p) v = std::clamp(v, 0.0, s.p_max);
    double best = sub.objective(p);
    const double start = best;

    for (double step = s.p_max / 4.0; step > s.p_max * 1e-8; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            // Single-coordinate moves plus the all-coordinates move; the
            // latter makes progress when the min is tied across users.
            for (std::size_t j = 0; j <= K; ++j) {
                for (double dir : {+1.0, -1.0}) {
                    std::vector<double> cand = p;
                    if (j < K)
                        cand[j] = std::clamp(cand[j] + dir * step, 0.0, s.p_max);
                    else
                        for (double& v : cand)
                            v = std::clamp(v + dir * step, 0.0, s.p_max);
                    if (cand == p) continue;
                    const double val = sub.objective(cand);
                    if (val > best) {
                        best = val;
                        p = std::move(cand);
                        improved = true;
                    }
                }
            }
        }
        if (step < opts.subproblem_tol * s.p_max && best - start < opts.subproblem_tol)
            break;
    }

    // Certified: pattern search only accepts improvements from p_hat.
    return PowerAllocation{p};
}

OptResult optimize_power(const Scenario& s, const std::vector<IniGainTable>& tables,
                         const SeModel& model, const PowerAllocation& init,
                         const ScaOptions& opts) {
    const std::size_t K = s.ues.size();
    if (init.per_ue.size() != K)
        throw std::invalid_argument("optimize_power: init size mismatch");

    OptimizerState state;
    state.p_hat = init;
    for (double& v : state.p_hat.per_ue) v = std::clamp(v, 0.0, s.p_max);
    for (const auto& u : s.ues) state.M.push_back(u.M);

    auto true_lambda = [&](const std::vector<double>& p) {
        return lambda_objective(se_matrix(s, tables, model, p));
    };

    double lambda = true_lambda(state.p_hat.per_ue);
    state.lambda_history.push_back(lambda);

    for (int r = 1; r <= opts.max_iterations; ++r) {
        state.iterate = r;
        PowerAllocation p_new = sca_power_step(state, s, tables, model, opts);
        const double lambda_new = true_lambda(p_new.per_ue);
        if (lambda_new < lambda) {
            // SCA guarantees non-decrease up to round-off; treat as converged.
            state.converged = true;
            break;
        }
        const double gain = lambda_new - lambda;
        state.p_hat = std::move(p_new);
        lambda = lambda_new;
        state.lambda_history.push_back(lambda);
        if (gain < opts.convergence_tol) {
            state.converged = true;
            break;
        }
    }

    // The uniform p_max point is always compared as a candidate.
    std::vector<double> uniform(K, s.p_max);
    if (true_lambda(uniform) > lambda) {
        state.p_hat.per_ue = uniform;
        lambda = true_lambda(uniform);
        state.lambda_history.push_back(lambda);
    }

    OptResult res;
    res.p = state.p_hat;
    res.lambda = lambda;
    res.trace = state.lambda_history;
    res.iterations = state.iterate;
    const auto se = se_matrix(s, tables, model, res.p.per_ue);
    for (std::size_t i = 0; i < K; ++i) {
        double worst = std::numeric_limits<double>::infinity();
        for (double v : se[i]) worst = std::min(worst, v);
        if (worst < model.se_floors[i] - 1e-6) {
            res.feasible = false;
            res.infeasible_ues.push_back(s.ues[i].id);
        }
    }
    return res;
}

namespace {

// Rebuild the template at a new mu assignment, keeping bandwidth fractions
// and the shared sample rate.
bool rebuild_at(const Scenario& templ, const std::vector<int>& mu, Scenario& out) {
    std::vector<UeSpec> specs;
    for (std::size_t i = 0; i < templ.ues.size(); ++i) {
        const UeNumerology& u = templ.ues[i];
        UeSpec spec;
        spec.mu = mu[i];
        const long long M_new = 1LL << mu[i];
        const long long num = static_cast<long long>(u.N) * M_new;
        if (num % u.M != 0) return false;  // fractional active count
        spec.n_active = static_cast<int>(num / u.M);
        if (spec.n_active < 1) return false;
        spec.delta_f_hz = templ.sample_rate / static_cast<double>(M_new);
        specs.push_back(spec);
    }
    out = make_scenario(specs);
    out.channel = templ.channel;
    out.sigma2 = templ.sigma2;
    out.p_max = templ.p_max;
    out.power_mode = templ.power_mode;
    out.explicit_powers = templ.explicit_powers;
    out.p_out = templ.p_out;
    out.se_floors = templ.se_floors;
    out.qam_order = templ.qam_order;
    out.seed = templ.seed;
    out.experiment = templ.experiment;
    out.mu_candidates = templ.mu_candidates;
    return validate_scenario(out).empty();
}

}  // namespace

NumerologySelection select_numerology(const Scenario& templ, const ScaOptions& opts) {
    const std::size_t K = templ.ues.size();
    std::vector<std::vector<int>> cand_sets(K);
    for (std::size_t i = 0; i < K; ++i) {
        if (i < templ.mu_candidates.size() && !templ.mu_candidates[i].empty())
            cand_sets[i] = templ.mu_candidates[i];
        else
            cand_sets[i] = {6, 7, 8, 9, 10};
    }

    NumerologySelection sel;
    bool have_best = false;
    double best_lambda = 0.0;
    long long best_mu_sum = 0;

    std::vector<std::size_t> idx(K, 0);
    for (;;) {
        std::vector<int> mu(K);
        for (std::size_t i = 0; i < K; ++i) mu[i] = cand_sets[i][idx[i]];

        Scenario s;
        if (rebuild_at(templ, mu, s)) {
            const auto channels = draw_scenario_channels(s);
            std::vector<IniGainTable> tables;
            for (const auto& u : s.ues)
                tables.push_back(ini_gain_table(s, u.id, channels));
            const SeModel model = make_se_model(s, channels);
            PowerAllocation init{std::vector<double>(K, s.p_max / 2.0)};
            OptResult res = optimize_power(s, tables, model, init, opts);

            sel.candidates.push_back({mu, res.lambda, res});

            long long mu_sum = 0;
            for (int m : mu) mu_sum += m;
            const bool better =
                !have_best || res.lambda > best_lambda + 1e-9 ||
                (std::abs(res.lambda - best_lambda) <= 1e-9 &&
                 (mu_sum < best_mu_sum ||
                  (mu_sum == best_mu_sum && mu < sel.mu)));
            if (better) {
                have_best = true;
                best_lambda = res.lambda;
                best_mu_sum = mu_sum;
                sel.mu = mu;
                sel.result = res;
                sel.scenario = s;
            }
        }

        // Odometer over candidate sets.
        std::size_t pos = 0;
        while (pos < K && ++idx[pos] == cand_sets[pos].size()) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == K) break;
    }

    if (!have_best)
        throw std::runtime_error("select_numerology: no feasible mu assignment");
    return sel;
}

}  // namespace mnulink
