// mnulink: multi-numerology DFT-s-OFDM uplink experiments.
//
// Subcommands: validate | ini | sir-cdf | optimize. Every experiment with a
// fixed --seed is bit-reproducible across runs and thread counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mnulink/channel.hpp"
#include "mnulink/ini_analytic.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/optimizer.hpp"
#include "mnulink/receiver.hpp"
#include "mnulink/rng.hpp"
#include "mnulink/scenario_io.hpp"

namespace {

using namespace mnulink;

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    std::string out;
    int threads = 1;
    bool verbose = false;
};

std::ostream& open_out(const GlobalOpts& g, std::ofstream& file) {
    if (g.out.empty()) return std::cout;
    file.open(g.out);
    if (!file) throw std::runtime_error("cannot open output file: " + g.out);
    return file;
}

void log(const GlobalOpts& g, const std::string& msg) {
    if (g.verbose) std::cerr << msg << "\n";
}

Scenario load_checked(const std::string& path, const GlobalOpts& g,
                      std::uint64_t* seed_out = nullptr) {
    Scenario sc = load_scenario(path);
    if (g.seed) sc.seed = *g.seed;
    auto errs = validate_scenario(sc);
    if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << path << ": " << describe(e) << "\n";
        throw CLI::RuntimeError(1);
    }
    if (seed_out) *seed_out = sc.seed;
    log(g, "scenario ok: " + std::to_string(sc.ues.size()) + " UEs, seed " +
               std::to_string(sc.seed));
    return sc;
}

int cmd_validate(const std::string& path, const GlobalOpts& g) {
    Scenario sc = load_scenario(path);
    if (g.seed) sc.seed = *g.seed;
    auto errs = validate_scenario(sc);
    for (const auto& e : errs) std::cerr << path << ": " << describe(e) << "\n";
    if (!errs.empty()) return 1;
    std::ofstream file;
    std::ostream& os = open_out(g, file);
    os << "ok\n";
    return 0;
}

int cmd_ini(const std::string& path, bool analytic, bool measured, int trials_override,
            const GlobalOpts& g) {
    Scenario sc = load_checked(path, g);
    int trials = trials_override > 0 ? trials_override : sc.experiment.trials;
    if (!analytic && !measured) analytic = measured = true;

    auto channels = draw_scenario_channels(sc);
    std::vector<IniProfile> profiles;
    for (const auto& ue : sc.ues) {
        if (analytic) {
            log(g, "analytic profile, victim " + std::to_string(ue.id));
            profiles.push_back(analytic_ini_profile(sc, ue.id, channels));
        }
        if (measured) {
            log(g, "measured profile, victim " + std::to_string(ue.id) + " (" +
                       std::to_string(trials) + " trials)");
            profiles.push_back(measure_ini(sc, ue.id, trials, sc.seed, g.threads));
        }
    }
    std::ofstream file;
    write_profiles_csv(open_out(g, file), profiles);
    return 0;
}

// Per-UE candidate orders compatible with the UE's exact bandwidth fraction
// (N'/M' = N/M with N' integral) at the fixed shared sample rate.
std::vector<std::vector<int>> feasible_mu_sets(const Scenario& sc) {
    std::vector<std::vector<int>> sets(sc.ues.size());
    for (std::size_t i = 0; i < sc.ues.size(); ++i) {
        std::vector<int> cand;
        if (i < sc.mu_candidates.size() && !sc.mu_candidates[i].empty())
            cand = sc.mu_candidates[i];
        else
            cand = {sc.ues[i].mu};
        for (int mu : cand) {
            if (mu < 6 || mu > 10) continue;
            long long Mp = 1LL << mu;
            long long num = static_cast<long long>(sc.ues[i].N) * Mp;
            if (num % sc.ues[i].M == 0) sets[i].push_back(mu);
        }
        std::sort(sets[i].begin(), sets[i].end());
        if (sets[i].empty()) sets[i].push_back(sc.ues[i].mu);
    }
    return sets;
}

Scenario rebuild_at(const Scenario& templ, const std::vector<int>& mu) {
    std::vector<UeSpec> specs(templ.ues.size());
    for (std::size_t i = 0; i < templ.ues.size(); ++i) {
        long long Mp = 1LL << mu[i];
        specs[i].mu = mu[i];
        specs[i].n_active =
            static_cast<int>(static_cast<long long>(templ.ues[i].N) * Mp / templ.ues[i].M);
        specs[i].delta_f_hz = templ.sample_rate / static_cast<double>(Mp);
    }
    Scenario sc = make_scenario(specs);
    sc.channel = templ.channel;
    sc.sigma2 = templ.sigma2;
    sc.p_max = templ.p_max;
    sc.power_mode = templ.power_mode;
    sc.explicit_powers = templ.explicit_powers;
    sc.p_out = templ.p_out;
    sc.se_floors = templ.se_floors;
    sc.qam_order = templ.qam_order;
    sc.seed = templ.seed;
    sc.experiment = templ.experiment;
    sc.mu_candidates = templ.mu_candidates;
    return sc;
}

std::vector<double> parse_power_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("--powers", "empty power list");
    return out;
}

int cmd_sir_cdf(const std::string& path, const std::string& powers_arg, int samples,
                const GlobalOpts& g) {
    Scenario templ = load_checked(path, g);
    std::vector<double> powers_mw =
        powers_arg.empty() ? std::vector<double>{1, 10, 100} : parse_power_list(powers_arg);
    auto mu_sets = feasible_mu_sets(templ);

    std::ofstream file;
    std::ostream& os = open_out(g, file);
    os << "power_mw,sir_db,cdf\n";
    for (std::size_t pi = 0; pi < powers_mw.size(); ++pi) {
        double p_w = powers_mw[pi] * 1e-3;
        std::vector<double> sir_db(samples);
        for (int s = 0; s < samples; ++s) {
            auto pick = substream(templ.seed, 3, pi, static_cast<std::uint64_t>(s));
            std::vector<int> mu(templ.ues.size());
            for (std::size_t i = 0; i < mu.size(); ++i)
                mu[i] = mu_sets[i][pick() % mu_sets[i].size()];
            Scenario sc = rebuild_at(templ, mu);
            sc.p_max = p_w;
            sc.power_mode = PowerMode::uniform;
            sc.experiment.fixed_channel = false;
            auto channels = draw_scenario_channels(sc, static_cast<std::uint64_t>(s));

            const auto& v = sc.ues.front();
            auto H = channels.front().freq_response(v.M);
            // Mean desired power per demapped subcarrier: the spread carries
            // a factor N, so the per-subcarrier power is N p |H|^2 and the
            // band average is p * sum |H|^2.
            double desired = 0;
            for (int n = 0; n < v.N; ++n) desired += std::norm(H[v.band_offset + n]);
            desired *= p_w;

            auto ini = expected_ini_power(sc, v.id, channels, sc.resolved_powers());
            double ini_mean =
                std::accumulate(ini.begin(), ini.end(), 0.0) / static_cast<double>(v.N);
            sir_db[s] = to_db(desired / std::max(ini_mean, 1e-300));
        }
        std::sort(sir_db.begin(), sir_db.end());
        for (int s = 0; s < samples; ++s)
            os << csv_num(powers_mw[pi]) << ',' << csv_num(sir_db[s]) << ','
               << csv_num(static_cast<double>(s + 1) / samples) << '\n';
    }
    return 0;
}

int cmd_optimize(const std::string& path, const std::string& powers_arg, bool compare_uniform,
                 const GlobalOpts& g) {
    Scenario templ = load_checked(path, g);
    std::vector<double> powers_mw = powers_arg.empty()
                                        ? std::vector<double>{templ.p_max * 1e3}
                                        : parse_power_list(powers_arg);

    std::ofstream file;
    std::ostream& os = open_out(g, file);
    os << "p_max_mw,lambda_optimized";
    if (compare_uniform) os << ",lambda_uniform";
    os << ",iterations,best_mu";
    for (std::size_t i = 0; i < templ.ues.size(); ++i) os << ",p_ue" << (i + 1) << "_mw";
    os << '\n';

    std::ofstream cand_file, trace_file;
    if (!g.out.empty()) {
        cand_file.open(g.out + ".candidates.csv");
        cand_file << "p_max_mw,candidate_mu,iterations,lambda";
        for (std::size_t i = 0; i < templ.ues.size(); ++i) cand_file << ",p_ue" << (i + 1) << "_mw";
        cand_file << '\n';
        trace_file.open(g.out + ".trace.csv");
        trace_file << "p_max_mw,iteration,lambda\n";
    }

    for (double pm_mw : powers_mw) {
        Scenario sc = templ;
        sc.p_max = pm_mw * 1e-3;
        log(g, "optimizing at p_max " + std::to_string(pm_mw) + " mW");
        NumerologySelection sel = select_numerology(sc);

        double lambda_uniform = 0;
        if (compare_uniform) {
            auto channels = draw_scenario_channels(sc);
            std::vector<IniGainTable> tables;
            for (const auto& ue : sc.ues) tables.push_back(ini_gain_table(sc, ue.id, channels));
            SeModel model = make_se_model(sc, channels);
            std::vector<double> uni(sc.ues.size(), sc.p_max);
            lambda_uniform = lambda_objective(se_matrix(sc, tables, model, uni));
        }

        std::string mu_str;
        for (std::size_t i = 0; i < sel.mu.size(); ++i)
            mu_str += (i ? "|" : "") + std::to_string(sel.mu[i]);
        os << csv_num(pm_mw) << ',' << csv_num(sel.result.lambda);
        if (compare_uniform) os << ',' << csv_num(lambda_uniform);
        os << ',' << sel.result.iterations << ',' << mu_str;
        for (double p : sel.result.p.per_ue) os << ',' << csv_num(p * 1e3);
        os << '\n';

        if (cand_file.is_open()) {
            for (const auto& c : sel.candidates) {
                std::string cm;
                for (std::size_t i = 0; i < c.mu.size(); ++i)
                    cm += (i ? "|" : "") + std::to_string(c.mu[i]);
                cand_file << csv_num(pm_mw) << ',' << cm << ',' << c.result.iterations << ','
                          << csv_num(c.lambda);
                for (double p : c.result.p.per_ue) cand_file << ',' << csv_num(p * 1e3);
                cand_file << '\n';
            }
            for (std::size_t it = 0; it < sel.result.trace.size(); ++it)
                trace_file << csv_num(pm_mw) << ',' << it << ',' << csv_num(sel.result.trace[it])
                           << '\n';
        }
        if (!sel.result.feasible) {
            std::cerr << "infeasible SE floors at p_max " << pm_mw << " mW for UEs:";
            for (int id : sel.result.infeasible_ues) std::cerr << ' ' << id;
            std::cerr << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-numerology DFT-s-OFDM uplink link-level experiments"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::uint64_t seed_arg = 0;
    auto* seed_opt = app.add_option("--seed", seed_arg, "Override the scenario seed");
    app.add_option("--out", g.out, "Output CSV path (default stdout)");
    app.add_option("--threads", g.threads, "Worker threads for Monte-Carlo runs")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", g.verbose, "Progress logging on stderr");

    std::string path;
    bool analytic = false, measured = false, compare_uniform = false;
    int trials = 0, samples = 200;
    std::string powers_arg;

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("scenario", path, "Scenario JSON file")->required();

    auto* ini = app.add_subcommand("ini", "Per-subcarrier interference profiles");
    ini->add_option("scenario", path, "Scenario JSON file")->required();
    ini->add_flag("--analytic", analytic, "Closed-form profile");
    ini->add_flag("--measured", measured, "Monte-Carlo profile");
    ini->add_option("--trials", trials, "Monte-Carlo trials (default: scenario)");

    auto* sir = app.add_subcommand("sir-cdf", "Average-SIR CDF over random numerologies");
    sir->add_option("scenario", path, "Scenario JSON file")->required();
    sir->add_option("--powers", powers_arg, "Comma-separated power levels [mW]");
    sir->add_option("--samples", samples, "CDF sample count")->check(CLI::PositiveNumber);

    auto* opt = app.add_subcommand("optimize", "Joint power and numerology optimization");
    opt->add_option("scenario", path, "Scenario JSON file")->required();
    opt->add_option("--powers", powers_arg, "Comma-separated p_max sweep [mW]");
    opt->add_flag("--compare-uniform", compare_uniform, "Also report the uniform baseline");

    try {
        app.parse(argc, argv);
        if (seed_opt->count()) g.seed = seed_arg;
        if (validate->parsed()) return cmd_validate(path, g);
        if (ini->parsed()) return cmd_ini(path, analytic, measured, trials, g);
        if (sir->parsed()) return cmd_sir_cdf(path, powers_arg, samples, g);
        if (opt->parsed()) return cmd_optimize(path, powers_arg, compare_uniform, g);
        return 2;
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ScenarioParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
