#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qfc/dispersion.hpp"

using namespace qfc;

namespace {

IndexModel quadratic_model() {
    IndexModel m;
    m.band = Band::signal;
    m.center_nm = 1533.0;
    m.coeffs = {2.0, -1.0e-3, 2.0e-6};
    m.range_lo_nm = 1500.0;
    m.range_hi_nm = 1560.0;
    m.validate();
    return m;
}

} // namespace

TEST_CASE("n_eff evaluates the polynomial about its center") {
    IndexModel m = quadratic_model();
    CHECK(n_eff(m, 1533.0) == doctest::Approx(2.0).epsilon(1e-15));
    // 2 - 1e-3*10 + 2e-6*100 at +10 nm.
    CHECK(n_eff(m, 1543.0) == doctest::Approx(1.9902).epsilon(1e-12));
}

TEST_CASE("n_eff rejects wavelengths outside the model range") {
    IndexModel m = quadratic_model();
    CHECK(thrown_code([&] { n_eff(m, 1499.0); }) == errc::range);
    CHECK(thrown_code([&] { n_eff(m, 1561.0); }) == errc::range);
    auto msg = thrown_message([&] { n_eff(m, 1499.0); });
    CHECK(msg.find("1500") != std::string::npos);
    CHECK(msg.find("1560") != std::string::npos);
}

TEST_CASE("n_group matches a finite-difference derivative") {
    IndexModel m = quadratic_model();
    const double lambda = 1540.0;
    const double h = 0.01;
    double dn = (n_eff(m, lambda + h) - n_eff(m, lambda - h)) / (2.0 * h);
    double expected = n_eff(m, lambda) - lambda * dn;
    CHECK(n_group(m, lambda) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("n_group on a linear model") {
    // n = 2.0 - 1e-4*(lambda - 1533) -> n_g = n + 1533*1e-4 at center.
    IndexModel m;
    m.band = Band::signal;
    m.center_nm = 1533.0;
    m.coeffs = {2.0, -1.0e-4};
    m.range_lo_nm = 1500.0;
    m.range_hi_nm = 1560.0;
    CHECK(n_group(m, 1533.0) == doctest::Approx(2.1533).epsilon(1e-12));
}

TEST_CASE("constant models fall back for the group index") {
    IndexModel m;
    m.band = Band::pump;
    m.center_nm = 1064.0;
    m.coeffs = {2.0};
    m.range_lo_nm = 1044.0;
    m.range_hi_nm = 1084.0;
    CHECK(m.is_constant());

    auto r = n_group_or_fallback(m, 1064.0, 2.2);
    CHECK(r.from_fallback);
    CHECK(r.value == doctest::Approx(2.2));

    auto r2 = n_group_or_fallback(quadratic_model(), 1533.0, 2.2);
    CHECK_FALSE(r2.from_fallback);
    CHECK(r2.value == doctest::Approx(n_group(quadratic_model(), 1533.0)));
}

TEST_CASE("resonant_index inverts the resonance condition") {
    // m*lambda/(2*pi*R) evaluated independently.
    CHECK(resonant_index(550, 1533.0, 74.0) ==
          doctest::Approx(1.813398517).epsilon(1e-9));
    CHECK(resonant_index(875, 1064.0, 74.0) ==
          doctest::Approx(2.002341243).epsilon(1e-9));
    CHECK(resonant_index(1584, 631.0, 74.0) ==
          doctest::Approx(2.149675706).epsilon(1e-9));

    // Round trip: the index puts the mode back on resonance.
    double n = resonant_index(550, 1533.0, 74.0);
    CHECK(2.0 * kPi * 74.0 * 1000.0 * n / 1533.0 ==
          doctest::Approx(550.0).epsilon(1e-12));

    CHECK(thrown_code([] { resonant_index(0, 1533.0, 74.0); }) ==
          errc::contract);
    CHECK(thrown_code([] { resonant_index(550, 1533.0, 0.0); }) ==
          errc::contract);
}

TEST_CASE("calibrate interpolates exactly through degree+1 anchors") {
    std::vector<IndexAnchor> anchors = {
        {1513.0, 1.96}, {1533.0, 2.00}, {1553.0, 2.03}};
    IndexModel m = calibrate(Band::signal, anchors, 2);
    for (const auto& a : anchors)
        CHECK(n_eff(m, a.lambda_nm) == doctest::Approx(a.n).epsilon(1e-12));
    // Default range pads the anchor span by 10 nm.
    CHECK(m.range_lo_nm == doctest::Approx(1503.0));
    CHECK(m.range_hi_nm == doctest::Approx(1563.0));
}

TEST_CASE("calibrate least-squares: collinear anchors leave no curvature") {
    std::vector<IndexAnchor> anchors;
    for (int i = 0; i <= 4; ++i)
        anchors.push_back({1513.0 + 10.0 * i, 2.0 - 1.0e-4 * 10.0 * i});
    IndexModel m = calibrate(Band::signal, anchors, 2);
    REQUIRE(m.coeffs.size() == 3);
    CHECK(std::abs(m.coeffs[2]) < 1e-12);
    CHECK(m.coeffs[1] == doctest::Approx(-1.0e-4).epsilon(1e-9));
}

TEST_CASE("calibrate input checking") {
    std::vector<IndexAnchor> two = {{1513.0, 1.96}, {1533.0, 2.0}};
    CHECK(thrown_code([&] { calibrate(Band::signal, two, 2); }) ==
          errc::contract);
    CHECK(thrown_code([&] { calibrate(Band::signal, two, 5); }) ==
          errc::contract);
    std::vector<IndexAnchor> dup = {{1533.0, 1.96}, {1533.0, 2.0}};
    CHECK(thrown_code([&] { calibrate(Band::signal, dup, 1); }) ==
          errc::degenerate_input);
}

TEST_CASE("default models resonate the stock geometry") {
    IndexModelSet models = default_index_models();
    CHECK(n_eff(models.signal, 1533.0) ==
          doctest::Approx(resonant_index(550, 1533.0, 74.0)).epsilon(1e-12));
    CHECK(n_eff(models.pump, 1064.0) ==
          doctest::Approx(resonant_index(875, 1064.0, 74.0)).epsilon(1e-12));
    CHECK(n_eff(models.sf, 631.0) ==
          doctest::Approx(resonant_index(1584, 631.0, 74.0)).epsilon(1e-12));
    CHECK(&models.for_band(Band::pump) == &models.pump);
}

TEST_CASE("waveguide cross-section validation") {
    WaveguideXSection xs{600.0, 350.0, 1730.0};
    CHECK_NOTHROW(xs.validate());
    xs.etch_depth_nm = 700.0; // deeper than the film
    CHECK(thrown_code([&] { xs.validate(); }) == errc::invariant_violation);
}

TEST_CASE("index model validation") {
    IndexModel m = quadratic_model();
    m.range_lo_nm = 1560.0;
    m.range_hi_nm = 1500.0;
    CHECK(thrown_code([&] { m.validate(); }) == errc::invariant_violation);

    m = quadratic_model();
    m.coeffs.clear();
    CHECK(thrown_code([&] { m.validate(); }) == errc::invariant_violation);

    m = quadratic_model();
    m.coeffs = {2.0, 0.0, 0.0, 0.0, 0.0, 1.0}; // degree 5
    CHECK(thrown_code([&] { m.validate(); }) == errc::invariant_violation);
}
