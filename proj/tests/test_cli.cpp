#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
    const char* b = std::getenv("MNULINK_BIN");
    REQUIRE(b != nullptr);
    return b;
}

std::string configs() {
    const char* c = std::getenv("MNULINK_CONFIGS");
    REQUIRE(c != nullptr);
    return c;
}

int run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("validate accepts the shipped scenarios") {
    CHECK(run("validate " + configs() + "/two_ue_alpha2.json") == 0);
    CHECK(run("validate " + configs() + "/three_ue_default.json") == 0);
    CHECK(run("validate " + configs() + "/same_numerology.json") == 0);
}

TEST_CASE("validate rejects an under-filled band with exit code 1") {
    const std::string p = "/tmp/mnulink_underfull.json";
    write_file(p, R"({
      "ues": [{"mu": 8, "n_active": 128, "delta_f_khz": 60},
              {"mu": 7, "n_active": 32}],
      "channel": {"taps": 1},
      "noise": {"sigma2": 0.0},
      "power": {"p_max_mw": 100}
    })");
    CHECK(run("validate " + p) == 1);
}

TEST_CASE("schema errors name the missing section and exit 1") {
    const std::string p = "/tmp/mnulink_nonoise.json";
    write_file(p, R"({
      "ues": [{"mu": 6, "n_active": 64, "delta_f_khz": 240}],
      "channel": {"taps": 1},
      "power": {"p_max_mw": 100}
    })");
    const std::string cmd =
        bin() + " validate " + p + " 2>/tmp/mnulink_nonoise.err >/dev/null";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
    CHECK(slurp("/tmp/mnulink_nonoise.err").find("noise") != std::string::npos);
}

TEST_CASE("unknown files and bad JSON do not crash") {
    CHECK(run("validate /tmp/definitely_missing_scenario.json") == 1);
    write_file("/tmp/mnulink_bad.json", "{ not json");
    CHECK(run("validate /tmp/mnulink_bad.json") == 1);
}

TEST_CASE("ini runs are bit-identical across repeats and thread counts") {
    const std::string sc = configs() + "/two_ue_alpha2.json";
    REQUIRE(run("--seed 7 --out /tmp/mnulink_a.csv --threads 1 ini " + sc +
                " --measured --analytic --trials 64") == 0);
    REQUIRE(run("--seed 7 --out /tmp/mnulink_b.csv --threads 1 ini " + sc +
                " --measured --analytic --trials 64") == 0);
    REQUIRE(run("--seed 7 --out /tmp/mnulink_c.csv --threads 8 ini " + sc +
                " --measured --analytic --trials 64") == 0);
    const std::string a = slurp("/tmp/mnulink_a.csv");
    CHECK(a == slurp("/tmp/mnulink_b.csv"));
    CHECK(a == slurp("/tmp/mnulink_c.csv"));
    CHECK(a.rfind("kind,victim,subcarrier_index,power_linear,power_db\n", 0) == 0);
}

TEST_CASE("sir-cdf emits a proper CDF per power level") {
    const std::string sc = configs() + "/three_ue_default.json";
    REQUIRE(run("--seed 3 --out /tmp/mnulink_sir.csv sir-cdf " + sc +
                " --powers 1,100 --samples 40") == 0);
    std::ifstream in("/tmp/mnulink_sir.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "power_mw,sir_db,cdf");
    double prev_cdf = 0.0, prev_sir = -1e300, last_cdf = 0.0;
    std::string prev_power;
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string pw, sir, cdf;
        REQUIRE(std::getline(ss, pw, ','));
        REQUIRE(std::getline(ss, sir, ','));
        REQUIRE(std::getline(ss, cdf, ','));
        if (pw != prev_power) {
            if (!prev_power.empty()) CHECK(last_cdf == doctest::Approx(1.0));
            prev_power = pw;
            prev_cdf = 0.0;
            prev_sir = -1e300;
        }
        CHECK(std::stod(cdf) >= prev_cdf);
        CHECK(std::stod(sir) >= prev_sir);
        prev_cdf = last_cdf = std::stod(cdf);
        prev_sir = std::stod(sir);
        ++rows;
    }
    CHECK(last_cdf == doctest::Approx(1.0));
    CHECK(rows == 2 * 40);
}

TEST_CASE("optimize reports the uniform baseline it dominates") {
    const std::string sc = configs() + "/three_ue_default.json";
    REQUIRE(run("--seed 5 --out /tmp/mnulink_opt.csv optimize " + sc +
                " --powers 10,100 --compare-uniform") == 0);
    std::ifstream in("/tmp/mnulink_opt.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("p_max_mw,lambda_optimized,lambda_uniform,iterations,best_mu", 0) ==
          0);
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string pw, lopt, luni;
        REQUIRE(std::getline(ss, pw, ','));
        REQUIRE(std::getline(ss, lopt, ','));
        REQUIRE(std::getline(ss, luni, ','));
        CHECK(std::stod(lopt) >= std::stod(luni) - 1e-6);
        ++rows;
    }
    CHECK(rows == 2);
    CHECK(slurp("/tmp/mnulink_opt.csv.candidates.csv")
              .rfind("p_max_mw,candidate_mu,iterations,lambda", 0) == 0);
    CHECK(slurp("/tmp/mnulink_opt.csv.trace.csv").rfind("p_max_mw,iteration,lambda", 0) ==
          0);
}

TEST_CASE("bad command lines exit with a usage error") {
    CHECK(run("") != 0);
    CHECK(run("frobnicate x.json") != 0);
}
