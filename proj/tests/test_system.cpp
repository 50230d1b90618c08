#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "qfc/system.hpp"

using namespace qfc;

TEST_CASE("channel budget") {
    // 20 mW source, 20% facet coupling, 360 uW per channel: 11 full channels.
    PowerBudget budget{20.0, 0.2, 360.0};
    CHECK(channel_count(budget) == 11);

    // An exact quotient is not rounded down by floating-point dust.
    PowerBudget exact{20.0, 0.2, 400.0};
    CHECK(channel_count(exact) == 10);

    // Monotone in the source power, inverse in the per-channel demand.
    PowerBudget more = budget;
    more.source_mw *= 2.0;
    CHECK(channel_count(more) == 22);
    PowerBudget hungrier = budget;
    hungrier.per_channel_uw = 5000.0;
    CHECK(channel_count(hungrier) == 0);

    budget.eta_couple = 0.0;
    CHECK(thrown_code([&] { channel_count(budget); }) ==
          errc::invariant_violation);
}

TEST_CASE("loss chain efficiency") {
    // Ring conversion times everything else downstream gives the observed
    // device total: 0.70 * 0.8142857142857143 = 0.57.
    LossChain chain;
    chain.stages = {{"ring_conversion", 0.70}, {"collection", 0.57 / 0.70}};
    ChainEfficiency eff = chain_efficiency(chain);
    CHECK(eff.fraction == doctest::Approx(0.57).epsilon(1e-12));
    CHECK(eff.db == doctest::Approx(-10.0 * std::log10(0.57)).epsilon(1e-12));

    // Order never matters for a product.
    LossChain reordered;
    reordered.stages = chain.stages;
    std::reverse(reordered.stages.begin(), reordered.stages.end());
    CHECK(chain_efficiency(reordered).fraction ==
          doctest::Approx(eff.fraction).epsilon(1e-15));

    LossChain empty;
    CHECK(thrown_code([&] { chain_efficiency(empty); }) == errc::empty_input);

    LossChain bad;
    bad.stages = {{"amplifier", 1.4}};
    CHECK(thrown_code([&] { chain_efficiency(bad); }) ==
          errc::invariant_violation);
}

TEST_CASE("DFB thermal tuning") {
    DfbTuning dfb;
    dfb.lambda0_nm = 1064.0;
    dfb.t0_c = 25.0;
    CHECK(dfb_wavelength_nm(dfb, 25.0) == doctest::Approx(1064.0));
    // +10 C at 85.5 pm/C is +0.855 nm.
    CHECK(dfb_wavelength_nm(dfb, 35.0) ==
          doctest::Approx(1064.855).epsilon(1e-12));
    CHECK(dfb_wavelength_nm(dfb, 20.0) ==
          doctest::Approx(1064.0 - 0.4275).epsilon(1e-12));

    // One full FSR of reach (2.2975 nm) costs about 26.9 C.
    const double dt = 2.2974710139 / (85.5e-3);
    CHECK(dt == doctest::Approx(26.871).epsilon(1e-3));
    CHECK(dfb_wavelength_nm(dfb, 25.0 + dt) - dfb_wavelength_nm(dfb, 25.0) ==
          doctest::Approx(2.2974710139).epsilon(1e-9));

    auto msg = thrown_message([&] { dfb_wavelength_nm(dfb, 80.0); });
    CHECK(thrown_code([&] { dfb_wavelength_nm(dfb, 80.0); }) == errc::range);
    CHECK(msg.find("15") != std::string::npos);
    CHECK(msg.find("60") != std::string::npos);
    CHECK(thrown_code([&] { dfb_wavelength_nm(dfb, 10.0); }) == errc::range);

    dfb.t_min_c = 70.0;
    CHECK(thrown_code([&] { dfb_wavelength_nm(dfb, 25.0); }) ==
          errc::invariant_violation);
}

TEST_CASE("pump-induced noise model") {
    NoiseModel noise;
    // The default linear coefficient anchors 7000 cps at 360 uW.
    CHECK(noise.at(360.0e-6) == doctest::Approx(7000.0).epsilon(1e-9));
    CHECK(noise.at(0.0) == 0.0);
    CHECK(noise.at(720.0e-6) == doctest::Approx(14000.0).epsilon(1e-9));

    NoiseModel quad{0.0, 1.0e10};
    CHECK(quad.at(1.0e-3) == doctest::Approx(1.0e4).epsilon(1e-12));

    CHECK(thrown_code([&] { noise.at(-1.0); }) == errc::contract);
    NoiseModel bad{-1.0, 0.0};
    CHECK(thrown_code([&] { bad.at(1.0); }) == errc::invariant_violation);
}
