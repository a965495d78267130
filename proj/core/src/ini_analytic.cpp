#include "mnulink/ini_analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace mnulink {

namespace {

cd expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

// e^{j2pi x} with x reduced mod 1 first, so large dyadic-rational phase
// accumulators keep full precision.
cd expi2pi(double x) { return expi(2.0 * kPi * std::remainder(x, 1.0)); }

long long iround(double alpha_inv) { return std::llround(alpha_inv); }

}  // namespace

cd dirichlet_ratio(double theta, long long L) {
    if (L <= 0) return {0.0, 0.0};
    // The sum is 1-periodic in theta; reducing first keeps sin arguments
    // small so the closed form stays accurate for large L.
    const double tr = theta - std::nearbyint(theta);
    const double s = std::sin(kPi * tr);
    if (std::abs(s) < 1e-15) return {static_cast<double>(L), 0.0};
    const double num = std::remainder(tr * static_cast<double>(L), 2.0);
    const double ph = std::remainder(tr * static_cast<double>(L - 1), 2.0);
    return expi(kPi * ph) * (std::sin(kPi * num) / s);
}

HelperQuantities helper_quantities(int l, int k, int q, const UeNumerology& cfg_i,
                                   const UeNumerology& cfg_j) {
    HelperQuantities h;
    const double Mi = cfg_i.M, Mj = cfg_j.M;
    h.nu_l = l + cfg_j.M - cfg_j.N;
    h.kappa = l / Mj + (cfg_i.N - k) / Mi;
    h.zeta = l / Mj - k / Mi;
    if (cfg_i.M > cfg_j.M) {  // alpha > 1: j is the higher numerology
        h.nu_q = static_cast<long long>(q) * cfg_j.symbol_span();
        // Segment 1 loses the victim CP from the receiver window; subsequent
        // segments are seen whole. (The first-segment count follows the
        // window overlap, consistent with the explicit per-sample ranges of
        // the derivation.)
        h.V_q = q == 1 ? cfg_j.symbol_span() - cfg_i.tau_cp : cfg_j.symbol_span();
        h.tau_alpha = 0;
    } else if (cfg_i.M < cfg_j.M) {  // alpha < 1: j is the lower numerology
        h.nu_q = static_cast<long long>(q) * cfg_i.symbol_span();
        h.V_q = cfg_i.M;
        h.tau_alpha = (iround(static_cast<double>(cfg_j.M) / cfg_i.M) - 1) * cfg_i.tau_cp;
    } else {
        h.nu_q = static_cast<long long>(q) * cfg_j.symbol_span();
        h.V_q = cfg_j.symbol_span();
        h.tau_alpha = 0;
    }
    return h;
}

cd q_high(int l, int k, int q, const UeNumerology& cfg_i, const UeNumerology& cfg_j) {
    const HelperQuantities h = helper_quantities(l, k, q, cfg_i, cfg_j);
    return dirichlet_ratio(h.kappa, h.V_q);
}

cd q_low(int l, int k, int q, const UeNumerology& cfg_i, const UeNumerology& cfg_j) {
    const HelperQuantities h = helper_quantities(l, k, q, cfg_i, cfg_j);
    const double Mi = cfg_i.M;
    if (q == 1) {
        // CP tail (tau_alpha samples relabeled as the last body indices of
        // the interferer grid) plus the body head.
        const cd q1 = dirichlet_ratio(h.zeta, h.tau_alpha) *
                      expi2pi((cfg_j.M - h.tau_alpha) * h.zeta);
        const cd q2 = dirichlet_ratio(h.zeta, cfg_i.M - h.tau_alpha);
        return q1 + q2;
    }
    return dirichlet_ratio(h.zeta, cfg_i.M) * expi2pi(h.zeta * (h.nu_q - Mi));
}

IniCoefficients build_ini_coefficients(const Scenario& s, int victim) {
    const UeNumerology& vic = s.ue(victim);
    const UserPartition part = partition_users(victim, s);
    const int Ni = vic.N;
    const int Mi = vic.M;
    const int offi = vic.band_offset;
    const long long Vi = vic.symbol_span();

    IniCoefficients coeffs;
    coeffs.victim = victim;

    auto add_term = [&](const UeNumerology& uj, bool higher, int q, int gl,
                        double weight, const cd& prefix, long long Vq, long long delta) {
        // per_n(n) = prefix/Mj * D(theta_n, Vq) e^{-j2pi delta k_n/Mi},
        // k_n = offi + n: the coefficient at the victim's n-th demapped
        // subcarrier. The profile lives at the demap output; the despreading
        // IDFT is deliberately not applied (it would smear the per-subcarrier
        // structure across the recovered data symbols).
        cvec per_n(Ni);
        const cd scale = prefix / static_cast<double>(uj.M);
        for (int t = 0; t < Ni; ++t) {
            const int k = offi + t;
            const double theta = static_cast<double>(gl) / uj.M -
                                 static_cast<double>(k) / Mi;
            per_n[t] = scale * dirichlet_ratio(theta, Vq) *
                       expi2pi(-static_cast<double>(delta) * k / Mi);
        }
        coeffs.terms.push_back({uj.id, higher, q, gl, weight, std::move(per_n)});
    };

    for (int jid : part.higher) {
        const UeNumerology& uj = s.ue(jid);
        const long long Vj = uj.symbol_span();
        const int alpha = Mi / uj.M;
        for (int q = 1; q <= alpha; ++q) {
            const long long m_q0 = q == 1 ? vic.tau_cp : (q - 1) * Vj;
            const long long Vq = q == 1 ? Vj - vic.tau_cp : Vj;
            const long long body_ref = m_q0 - (q - 1) * Vj - uj.tau_cp;
            const long long delta = m_q0 - vic.tau_cp;
            for (int gl = uj.band_offset; gl < uj.band_offset + uj.N; ++gl) {
                const cd prefix = expi2pi(gl * static_cast<double>(body_ref) / uj.M);
                add_term(uj, true, q, gl, 1.0, prefix, Vq, delta);
            }
        }
    }

    for (int jid : part.lower) {
        const UeNumerology& uj = s.ue(jid);
        const int beta = uj.M / Mi;
        for (int q = 1; q <= beta; ++q) {
            // Victim symbol position q inside the interferer frame; the
            // receiver window starts at a_q and sees a full M_i-sample cut of
            // the interferer's exponentials.
            const long long a_q = (q - 1) * Vi + vic.tau_cp;
            for (int gl = uj.band_offset; gl < uj.band_offset + uj.N; ++gl) {
                const cd prefix =
                    expi2pi(gl * static_cast<double>(a_q - uj.tau_cp) / uj.M);
                add_term(uj, false, q, gl, 1.0 / beta, prefix, Mi, 0);
            }
        }
    }

    return coeffs;
}

namespace {

const ChannelRealization& channel_of(const Scenario& s,
                                     const std::vector<ChannelRealization>& channels,
                                     int ue_id) {
    for (std::size_t i = 0; i < s.ues.size(); ++i)
        if (s.ues[i].id == ue_id) return channels.at(i);
    throw std::invalid_argument("no channel for UE " + std::to_string(ue_id));
}

}  // namespace

cd ini_high(int n, int victim, const Scenario& s,
            const std::vector<ChannelRealization>& channels, const SegmentData& data,
            const IniCoefficients& coeffs) {
    if (coeffs.victim != victim)
        throw std::invalid_argument("ini_high: coefficient table victim mismatch");
    std::map<int, cvec> H;  // per-UE response on its own grid
    cd acc{0.0, 0.0};
    for (const auto& term : coeffs.terms) {
        if (!term.higher) continue;
        auto it = H.find(term.ue);
        if (it == H.end())
            it = H.emplace(term.ue,
                           channel_of(s, channels, term.ue).freq_response(s.ue(term.ue).M))
                     .first;
        const auto& grids = data.at(term.ue);
        const cd x = grids.at(term.segment - 1).values.at(term.grid_index);
        acc += x * it->second[term.grid_index] * term.per_n.at(n);
    }
    return acc;
}

cd ini_low(int n, int victim, const Scenario& s,
           const std::vector<ChannelRealization>& channels, const SegmentData& data,
           const IniCoefficients& coeffs, int victim_slot) {
    if (coeffs.victim != victim)
        throw std::invalid_argument("ini_low: coefficient table victim mismatch");
    std::map<int, cvec> H;
    cd acc{0.0, 0.0};
    for (const auto& term : coeffs.terms) {
        if (term.higher) continue;
        const int beta = s.ue(term.ue).M / s.ue(victim).M;
        const int q = victim_slot % beta + 1;
        if (term.segment != q) continue;
        auto it = H.find(term.ue);
        if (it == H.end())
            it = H.emplace(term.ue,
                           channel_of(s, channels, term.ue).freq_response(s.ue(term.ue).M))
                     .first;
        const cd x = data.at(term.ue).at(0).values.at(term.grid_index);
        acc += x * it->second[term.grid_index] * term.per_n.at(n);
    }
    return acc;
}

cd total_ini(int n, int victim, const Scenario& s,
             const std::vector<ChannelRealization>& channels, const SegmentData& data,
             const IniCoefficients& coeffs, int victim_slot) {
    return ini_high(n, victim, s, channels, data, coeffs) +
           ini_low(n, victim, s, channels, data, coeffs, victim_slot);
}

std::vector<double> expected_ini_power(const Scenario& s, int victim,
                                       const std::vector<ChannelRealization>& channels,
                                       const std::vector<double>& powers,
                                       const IniCoefficients* cached) {
    IniCoefficients local;
    if (!cached) {
        local = build_ini_coefficients(s, victim);
        cached = &local;
    }
    const UeNumerology& vic = s.ue(victim);
    std::vector<double> out(vic.N, 0.0);

    std::map<int, cvec> H;
    std::map<int, double> power_of;
    std::map<int, int> n_active;
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        power_of[s.ues[i].id] = powers.at(i);
        n_active[s.ues[i].id] = s.ues[i].N;
    }

    for (const auto& term : cached->terms) {
        auto it = H.find(term.ue);
        if (it == H.end())
            it = H.emplace(term.ue,
                           channel_of(s, channels, term.ue).freq_response(s.ue(term.ue).M))
                     .first;
        // E|X_j(gl)|^2 = p_j * N_j for unnormalized DFT-spread unit-power data.
        const double scale = term.weight * power_of[term.ue] * n_active[term.ue] *
                             std::norm(it->second[term.grid_index]);
        for (int n = 0; n < vic.N; ++n) out[n] += scale * std::norm(term.per_n[n]);
    }
    return out;
}

IniProfile analytic_ini_profile(const Scenario& s, int victim,
                                const std::vector<ChannelRealization>& channels) {
    IniProfile profile;
    profile.victim = victim;
    profile.kind = IniProfile::Kind::analytic;
    profile.per_subcarrier = expected_ini_power(s, victim, channels, s.resolved_powers());
    return profile;
}

IniGainTable ini_gain_table(const Scenario& s, int victim,
                            const std::vector<ChannelRealization>& channels,
                            const IniCoefficients* cached) {
    IniCoefficients local;
    if (!cached) {
        local = build_ini_coefficients(s, victim);
        cached = &local;
    }
    IniGainTable table;
    table.victim = victim;
    const UeNumerology& vic = s.ue(victim);
    table.gain.assign(s.ues.size(), std::vector<double>(vic.N, 0.0));

    std::map<int, std::size_t> index_of;
    std::map<int, int> n_active;
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        index_of[s.ues[i].id] = i;
        n_active[s.ues[i].id] = s.ues[i].N;
    }
    std::map<int, cvec> H;
    for (const auto& term : cached->terms) {
        auto it = H.find(term.ue);
        if (it == H.end())
            it = H.emplace(term.ue,
                           channel_of(s, channels, term.ue).freq_response(s.ue(term.ue).M))
                     .first;
        const double scale = term.weight * n_active[term.ue] *
                             std::norm(it->second[term.grid_index]);
        auto& row = table.gain[index_of[term.ue]];
        for (int n = 0; n < vic.N; ++n) row[n] += scale * std::norm(term.per_n[n]);
    }
    return table;
}

}  // namespace mnulink
