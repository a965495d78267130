#include <doctest.h>

#include <cmath>

#include "mnulink/channel.hpp"
#include "mnulink/fft.hpp"
#include "mnulink/numerology.hpp"
#include "mnulink/rng.hpp"

using namespace mnulink;

TEST_CASE("tap energy is normalized in expectation") {
    auto gen = substream(21, 0, 0);
    const int draws = 10000;
    double acc = 0;
    for (int i = 0; i < draws; ++i) {
        auto ch = draw_channel(gen, 8);
        REQUIRE(ch.taps().size() == 8);
        for (auto& t : ch.taps()) acc += std::norm(t);
    }
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("frequency response matches the tap DFT") {
    auto gen = substream(22, 0, 0);
    auto ch = draw_channel(gen, 4);
    auto H = ch.freq_response(64);
    REQUIRE(H.size() == 64);
    for (int k = 0; k < 64; ++k) {
        cd ref = 0;
        for (int m = 0; m < 4; ++m)
            ref += ch.taps()[m] * std::polar(1.0, -2.0 * kPi * m * k / 64.0);
        CHECK(std::abs(H[k] - ref) < 1e-12);
    }
}

TEST_CASE("identity channel is flat unity") {
    auto H = identity_channel().freq_response(32);
    for (auto& h : H) CHECK(std::abs(h - cd(1.0, 0.0)) < 1e-15);
}

TEST_CASE("fixed-channel scenarios reuse one realization across trials") {
    Scenario s = make_scenario({{8, 128, 60e3, {}}, {7, 64, std::nullopt, {}}});
    s.experiment.fixed_channel = true;
    auto a = draw_scenario_channels(s, 0);
    auto b = draw_scenario_channels(s, 17);
    REQUIRE(a.size() == 2);
    CHECK(a[0].taps() == b[0].taps());
    CHECK(a[1].taps() == b[1].taps());

    s.experiment.fixed_channel = false;
    auto c = draw_scenario_channels(s, 17);
    CHECK(a[0].taps() != c[0].taps());
}

TEST_CASE("received_signal sums convolutions and rejects span mismatch") {
    ComplexSignal x1{cvec{1, 0, 0, 0}, 1.0};
    ComplexSignal x2{cvec{0, 1, 0, 0}, 1.0};
    ChannelRealization h1(cvec{cd(2, 0), cd(1, 0)});
    ChannelRealization h2(cvec{cd(0, 1)});
    auto gen = substream(23, 0, 0);
    auto r = received_signal({{&x1, &h1}, {&x2, &h2}}, {0.0}, gen);
    REQUIRE(r.samples.size() == 4);
    CHECK(std::abs(r.samples[0] - cd(2, 0)) < 1e-15);
    CHECK(std::abs(r.samples[1] - cd(1, 1)) < 1e-15);
    CHECK(std::abs(r.samples[2]) < 1e-15);

    ComplexSignal bad{cvec{1, 2, 3}, 1.0};
    CHECK_THROWS_AS(received_signal({{&x1, &h1}, {&bad, &h2}}, {0.0}, gen),
                    std::invalid_argument);
}

TEST_CASE("additive noise has the requested variance") {
    ComplexSignal zero{cvec(512, cd(0, 0)), 1.0};
    ChannelRealization h(cvec{cd(1, 0)});
    auto gen = substream(24, 0, 0);
    double acc = 0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        auto r = received_signal({{&zero, &h}}, {0.5}, gen);
        for (auto& v : r.samples) acc += std::norm(v);
    }
    CHECK(acc / (512.0 * reps) == doctest::Approx(0.5).epsilon(0.02));
}
