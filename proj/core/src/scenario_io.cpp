#include "mnulink/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mnulink {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw ScenarioParseError(origin + ": " + msg);
}

const json& require(const json& doc, const char* key, const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(origin, std::string("missing required section '") + key + "'");
    return *it;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& origin, T fallback,
        bool required = false) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required) fail(origin, std::string("missing required field '") + key + "'");
        return fallback;
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        fail(origin, std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }
    if (!doc.is_object()) fail(origin, "top-level document must be an object");

    const json& jues = require(doc, "ues", origin);
    if (!jues.is_array() || jues.empty())
        fail(origin, "'ues' must be a non-empty array");

    std::vector<UeSpec> specs;
    for (std::size_t i = 0; i < jues.size(); ++i) {
        const std::string at = origin + " (ues[" + std::to_string(i) + "])";
        const json& ju = jues[i];
        UeSpec spec;
        spec.mu = field<int>(ju, "mu", at, 0, true);
        spec.n_active = field<int>(ju, "n_active", at, 0, true);
        if (ju.contains("delta_f_khz"))
            spec.delta_f_hz = field<double>(ju, "delta_f_khz", at, 0.0) * 1e3;
        spec.mu_candidates = field<std::vector<int>>(ju, "mu_candidates", at, {});
        specs.push_back(spec);
    }
    Scenario s = make_scenario(specs);

    const json& jchan = require(doc, "channel", origin);
    s.channel.taps = field<int>(jchan, "taps", origin + " (channel)", 4);
    if (jchan.contains("seed"))
        s.seed = field<std::uint64_t>(jchan, "seed", origin + " (channel)", 42);

    const json& jnoise = require(doc, "noise", origin);
    s.sigma2 = field<double>(jnoise, "sigma2", origin + " (noise)", 0.0, true);

    const json& jpow = require(doc, "power", origin);
    s.p_max = field<double>(jpow, "p_max_mw", origin + " (power)", 100.0, true) * 1e-3;
    const std::string alloc =
        field<std::string>(jpow, "allocation", origin + " (power)", "uniform");
    if (alloc == "uniform") {
        s.power_mode = PowerMode::uniform;
    } else if (alloc == "optimized") {
        s.power_mode = PowerMode::optimized;
    } else if (alloc == "explicit") {
        s.power_mode = PowerMode::explicit_list;
        auto mw = field<std::vector<double>>(jpow, "explicit_mw", origin + " (power)", {},
                                             true);
        for (double v : mw) s.explicit_powers.push_back(v * 1e-3);
    } else {
        fail(origin, "power.allocation must be uniform, optimized or explicit");
    }

    if (doc.contains("outage"))
        s.p_out = field<double>(doc["outage"], "p_out", origin + " (outage)", 0.0);
    if (doc.contains("floors"))
        s.se_floors =
            field<std::vector<double>>(doc["floors"], "lambda", origin + " (floors)", {});
    if (doc.contains("experiment")) {
        const json& je = doc["experiment"];
        s.experiment.trials = field<int>(je, "trials", origin + " (experiment)", 2000);
        s.experiment.fixed_channel =
            field<bool>(je, "fixed_channel", origin + " (experiment)", true);
    }
    if (doc.contains("seed"))
        s.seed = field<std::uint64_t>(doc, "seed", origin, s.seed);
    if (doc.contains("qam_order"))
        s.qam_order = field<int>(doc, "qam_order", origin, 64);

    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double to_db(double linear) { return 10.0 * std::log10(std::max(linear, 1e-300)); }

void write_profiles_csv(std::ostream& os, const std::vector<IniProfile>& profiles) {
    os << "kind,victim,subcarrier_index,power_linear,power_db\n";
    for (const auto& prof : profiles) {
        const char* kind =
            prof.kind == IniProfile::Kind::measured ? "measured" : "analytic";
        for (std::size_t n = 0; n < prof.per_subcarrier.size(); ++n) {
            const double v = prof.per_subcarrier[n];
            os << kind << ',' << prof.victim << ',' << n << ',' << csv_num(v) << ','
               << csv_num(to_db(v)) << '\n';
        }
    }
}

}  // namespace mnulink
