#include <doctest.h>

#include <algorithm>

#include "mnulink/numerology.hpp"

using namespace mnulink;

namespace {

Scenario three_ue() {
    return make_scenario({{8, 128, 60e3, {}}, {7, 32, std::nullopt, {}},
                          {7, 32, std::nullopt, {}}});
}

bool has_message(const std::vector<ValidationError>& errs, const std::string& needle) {
    return std::any_of(errs.begin(), errs.end(), [&](const ValidationError& e) {
        return e.message.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("make_scenario derives orders, CP lengths and spacings") {
    Scenario s = three_ue();
    REQUIRE(s.ues.size() == 3);
    CHECK(s.ues[0].M == 256);
    CHECK(s.ues[0].Nz == 128);
    CHECK(s.ues[0].tau_cp == 16);
    CHECK(s.ues[0].delta_f == doctest::Approx(60e3));
    CHECK(s.ues[1].M == 128);
    CHECK(s.ues[1].tau_cp == 8);
    CHECK(s.ues[1].delta_f == doctest::Approx(120e3));
    CHECK(s.sample_rate == doctest::Approx(256 * 60e3));
}

TEST_CASE("band layout is contiguous from the bottom in UE order") {
    Scenario s = three_ue();
    CHECK(s.ues[0].band_offset == 0);
    CHECK(s.ues[1].band_offset == 64);   // 1/2 of 128
    CHECK(s.ues[2].band_offset == 96);   // 3/4 of 128
    CHECK(validate_scenario(s).empty());
}

TEST_CASE("scaling factor and user partition") {
    Scenario s = three_ue();
    CHECK(scaling_factor(s.ue(1), s.ue(2)) == doctest::Approx(2.0));
    CHECK(scaling_factor(s.ue(2), s.ue(1)) == doctest::Approx(0.5));

    // UEs 2 and 3 use the wider spacing (smaller M), so they are the
    // higher-numerology set relative to UE 1.
    auto part = partition_users(1, s);
    CHECK(part.higher == std::vector<int>{2, 3});
    CHECK(part.lower.empty());
    CHECK(part.same.empty());

    part = partition_users(2, s);
    CHECK(part.lower == std::vector<int>{1});
    CHECK(part.same == std::vector<int>{3});
    CHECK(part.higher.empty());

    CHECK_THROWS_AS(partition_users(9, s), std::invalid_argument);
}

TEST_CASE("fractions that do not fill the band are rejected with the sum") {
    Scenario s = make_scenario({{8, 128, 60e3, {}}, {7, 32, std::nullopt, {}}});
    auto errs = validate_scenario(s);
    CHECK(has_message(errs, "bandwidth fractions sum to 3/4"));
}

TEST_CASE("overlap and gaps break contiguity") {
    Scenario s = three_ue();
    s.ues[1].band_offset = 60;  // drifts below the 1/2 boundary
    CHECK(has_message(validate_scenario(s), "contiguity"));

    Scenario g = make_scenario({{8, 128, 60e3, {}}, {7, 48, std::nullopt, {}}});
    CHECK(has_message(validate_scenario(g), "bandwidth fractions sum to"));
}

TEST_CASE("mu outside the supported range is rejected") {
    Scenario s = make_scenario({{5, 16, 60e3, {}}, {5, 16, std::nullopt, {}}});
    CHECK(has_message(validate_scenario(s), "outside {6..10}"));
}

TEST_CASE("mismatched sample rate is rejected") {
    Scenario s = three_ue();
    s.ues[1].delta_f = 60e3;
    CHECK(has_message(validate_scenario(s), "shared sample rate"));
}

TEST_CASE("CP sufficiency against the channel taps") {
    Scenario s = three_ue();
    s.channel.taps = 10;  // shortest CP is 8, so L = tau + 1 = 9 is the limit
    CHECK(has_message(validate_scenario(s), "exceed the shortest CP"));
    s.channel.taps = 9;
    CHECK(validate_scenario(s).empty());
}

TEST_CASE("explicit power lists are range checked") {
    Scenario s = three_ue();
    s.power_mode = PowerMode::explicit_list;
    s.explicit_powers = {0.05, 0.2, 0.05};
    CHECK(has_message(validate_scenario(s), "outside [0, p_max]"));
    s.explicit_powers = {0.05, 0.1};
    CHECK(has_message(validate_scenario(s), "one entry per UE"));
}

TEST_CASE("frame spans align exactly for every numerology pair") {
    for (int mi = 6; mi <= 10; ++mi) {
        for (int mj = 6; mj <= 10; ++mj) {
            const long long Mi = 1LL << mi, Mj = 1LL << mj;
            const long long span_i = Mi + Mi / 16, span_j = Mj + Mj / 16;
            // alpha_{i,j} = Mi/Mj: span_i * Mj == alpha-scaled span_j * Mj.
            CHECK(span_i * Mj == span_j * Mi);
        }
    }
}

TEST_CASE("describe prefixes the UE id") {
    CHECK(describe({0, "boom"}) == "scenario: boom");
    CHECK(describe({3, "boom"}) == "UE 3: boom");
}
