#include "mnulink/numerology.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mnulink {

using rational = boost::rational<long long>;

const UeNumerology& Scenario::ue(int id) const {
    for (const auto& u : ues)
        if (u.id == id) return u;
    throw std::invalid_argument("unknown UE id " + std::to_string(id));
}

std::vector<double> Scenario::resolved_powers() const {
    std::vector<double> p(ues.size(), p_max);
    if (power_mode == PowerMode::explicit_list) {
        if (explicit_powers.size() != ues.size())
            throw std::invalid_argument("explicit power list length mismatch");
        p = explicit_powers;
    }
    return p;
}

double scaling_factor(const UeNumerology& cfg_i, const UeNumerology& cfg_j) {
    return static_cast<double>(cfg_i.M) / static_cast<double>(cfg_j.M);
}

UserPartition partition_users(int victim, const Scenario& scenario) {
    const UeNumerology& vic = scenario.ue(victim);  // throws if unknown
    UserPartition part;
    part.victim = victim;
    for (const auto& u : scenario.ues) {
        if (u.id == victim) continue;
        const double alpha = scaling_factor(vic, u);
        if (alpha > 1.0)
            part.higher.push_back(u.id);
        else if (alpha < 1.0)
            part.lower.push_back(u.id);
        else
            part.same.push_back(u.id);
    }
    return part;
}

namespace {

bool is_pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

std::string to_string(const rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace

std::vector<ValidationError> validate_scenario(const Scenario& s) {
    std::vector<ValidationError> errs;
    auto err = [&](int ue, std::string msg) { errs.push_back({ue, std::move(msg)}); };

    if (s.ues.empty()) {
        err(0, "scenario has no UEs");
        return errs;
    }

    for (const auto& u : s.ues) {
        if (u.mu < 6 || u.mu > 10)
            err(u.id, "mu=" + std::to_string(u.mu) + " outside {6..10}");
        if (!is_pow2(u.M) || u.M != (1 << u.mu))
            err(u.id, "M=" + std::to_string(u.M) + " is not 2^mu");
        if (u.N < 1 || u.N > u.M)
            err(u.id, "active subcarrier count N=" + std::to_string(u.N) +
                          " outside [1, M]");
        if (u.M != u.N + u.Nz)
            err(u.id, "M != N + Nz");
        if (u.tau_cp * 16 != u.M)
            err(u.id, "tau_cp != M/16");
        if (u.band_offset < 0 || u.band_offset + u.N > u.M)
            err(u.id, "band [" + std::to_string(u.band_offset) + ", " +
                          std::to_string(u.band_offset + u.N) +
                          ") does not fit the M-grid");
    }
    if (!errs.empty()) return errs;  // derived checks assume well-formed UEs

    // Common sample rate.
    const double rate = static_cast<double>(s.ues.front().M) * s.ues.front().delta_f;
    for (const auto& u : s.ues) {
        const double r = static_cast<double>(u.M) * u.delta_f;
        if (std::abs(r - rate) > 1e-6 * std::max(1.0, rate))
            err(u.id, "M*delta_f differs from the shared sample rate");
    }
    if (s.sample_rate > 0 && std::abs(s.sample_rate - rate) > 1e-6 * rate)
        err(0, "scenario sample_rate does not equal M*delta_f");

    // Exact bandwidth partition: fractions sum to one, bands contiguous in
    // ascending UE-id order without gaps or overlap.
    rational cum(0);
    for (const auto& u : s.ues) {
        const rational offset_frac(u.band_offset, u.M);
        if (offset_frac != cum)
            err(u.id, "band offset " + std::to_string(u.band_offset) +
                          " breaks contiguity (expected fraction " + to_string(cum) +
                          " of the shared band)");
        cum += rational(u.N, u.M);
    }
    if (cum != rational(1))
        err(0, "bandwidth fractions sum to " + to_string(cum));

    // CP sufficiency for the configured channel length.
    int min_cp = s.ues.front().tau_cp;
    for (const auto& u : s.ues) min_cp = std::min(min_cp, u.tau_cp);
    if (s.channel.taps < 1)
        err(0, "channel tap count must be >= 1");
    else if (s.channel.taps > min_cp + 1)
        err(0, "channel taps L=" + std::to_string(s.channel.taps) +
                   " exceed the shortest CP (" + std::to_string(min_cp) + " samples) + 1");

    if (s.sigma2 < 0) err(0, "noise variance must be >= 0");
    if (s.p_max < 0) err(0, "p_max must be >= 0");
    if (s.p_out < 0 || s.p_out >= 1) err(0, "p_out must lie in [0, 1)");
    if (s.experiment.trials < 1) err(0, "experiment.trials must be >= 1");
    if (s.power_mode == PowerMode::explicit_list) {
        if (s.explicit_powers.size() != s.ues.size())
            err(0, "explicit power list must have one entry per UE");
        else
            for (std::size_t i = 0; i < s.explicit_powers.size(); ++i)
                if (s.explicit_powers[i] < 0 || s.explicit_powers[i] > s.p_max)
                    err(s.ues[i].id, "explicit power outside [0, p_max]");
    }
    if (!s.se_floors.empty() && s.se_floors.size() != s.ues.size())
        err(0, "se_floors must be empty or have one entry per UE");
    for (std::size_t i = 0; i < s.se_floors.size(); ++i)
        if (s.se_floors[i] < 0) err(s.ues[i].id, "SE floor must be >= 0");

    return errs;
}

Scenario make_scenario(const std::vector<UeSpec>& ues) {
    Scenario s;
    if (ues.empty()) return s;

    // Sample-rate anchor: first UE with an explicit spacing, else 60 kHz on UE 1.
    double rate = 0;
    for (std::size_t i = 0; i < ues.size(); ++i) {
        if (ues[i].delta_f_hz) {
            rate = static_cast<double>(1 << ues[i].mu) * *ues[i].delta_f_hz;
            break;
        }
    }
    if (rate == 0) rate = static_cast<double>(1 << ues[0].mu) * 60e3;
    s.sample_rate = rate;

    rational cum(0);
    for (std::size_t i = 0; i < ues.size(); ++i) {
        UeNumerology u;
        u.id = static_cast<int>(i) + 1;
        u.mu = ues[i].mu;
        u.M = ues[i].mu > 0 && ues[i].mu < 31 ? (1 << ues[i].mu) : 0;
        u.N = ues[i].n_active;
        u.Nz = u.M - u.N;
        u.tau_cp = u.M / 16;
        u.delta_f = ues[i].delta_f_hz ? *ues[i].delta_f_hz
                                      : (u.M > 0 ? rate / u.M : 0.0);
        // Contiguous layout from the bottom of the shared band; a fractional
        // offset is floored here and reported by validate_scenario.
        const rational off = cum * rational(u.M);
        u.band_offset = static_cast<int>(off.numerator() / off.denominator());
        if (u.M > 0) cum += rational(u.N, u.M);
        s.ues.push_back(u);
        s.mu_candidates.push_back(ues[i].mu_candidates);
    }
    return s;
}

std::string describe(const ValidationError& err) {
    if (err.ue_id == 0) return "scenario: " + err.message;
    return "UE " + std::to_string(err.ue_id) + ": " + err.message;
}

}  // namespace mnulink
