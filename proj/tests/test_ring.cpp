#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "qfc/ring.hpp"

using namespace qfc;

namespace {

RingParams reference_ring() {
    return RingParams::from_radius(74.0, 1.73, 0.2);
}

CouplerSpec reference_couplers() {
    CouplerSpec c;
    c.set_kappa2(Band::signal, Port::A, 0.03);
    c.set_kappa2(Band::signal, Port::B, 0.004);
    c.set_kappa2(Band::pump, Port::A, 0.03);
    c.set_kappa2(Band::pump, Port::B, 0.003);
    c.set_kappa2(Band::sf, Port::A, 0.005);
    c.set_kappa2(Band::sf, Port::B, 0.05);
    c.validate();
    return c;
}

// Ring whose fractional round-trip loss is exactly `scale` times that of
// `base`, for loss-scaling properties (alpha itself is not linear in the
// fractional loss).
RingParams ring_with_scaled_loss(const RingParams& base, double scale) {
    const double target = scale * alpha_roundtrip(base);
    const double loss_db = -10.0 * std::log10(1.0 - target);
    return RingParams::from_radius(base.radius_um, base.w_ring_um,
                                   loss_db / (base.circumference_um * 1e-4));
}

CouplerSpec scaled_couplers(const CouplerSpec& base, double scale) {
    CouplerSpec c = base;
    for (Band band : {Band::signal, Band::pump, Band::sf})
        for (Port port : {Port::A, Port::B})
            c.set_kappa2(band, port, scale * base.kappa2_at(band, port));
    return c;
}

} // namespace

TEST_CASE("ring construction and validation") {
    RingParams ring = reference_ring();
    CHECK(ring.circumference_um ==
          doctest::Approx(464.9557127).epsilon(1e-9));
    CHECK_NOTHROW(ring.validate());

    ring.circumference_um = 400.0;
    CHECK(thrown_code([&] { ring.validate(); }) == errc::invariant_violation);
    CHECK(thrown_code([] { RingParams::from_radius(-1.0, 1.73, 0.2); }) ==
          errc::invariant_violation);
}

TEST_CASE("coupler spec storage and bounds") {
    CouplerSpec c = reference_couplers();
    CHECK(c.kappa2_at(Band::sf, Port::B) == doctest::Approx(0.05));
    c.set_kappa2(Band::pump, Port::B, 1.0);
    CHECK(thrown_code([&] { c.validate(); }) == errc::invariant_violation);
    c.set_kappa2(Band::pump, Port::B, -0.01);
    CHECK(thrown_code([&] { c.validate(); }) == errc::invariant_violation);
}

TEST_CASE("round-trip loss fraction") {
    CHECK(alpha_roundtrip(reference_ring()) ==
          doctest::Approx(0.0021389095).epsilon(1e-7));
    CHECK(alpha_roundtrip(RingParams::from_radius(74.0, 1.73, 0.0)) == 0.0);

    // 10 dB over one round trip leaves 10% of the power.
    RingParams lossy = RingParams::from_radius(74.0, 1.73, 0.0);
    lossy.alpha_db_per_cm = 10.0 / (lossy.circumference_um * 1e-4);
    CHECK(alpha_roundtrip(lossy) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("qpm order and poling period") {
    CHECK(qpm_order(550, 875, 1584) == 159);
    ModeTriple triple{550, 875, 1584, 1533.0, 1064.0, 631.0, 159};
    CHECK(qpm_order(triple) == 159);
    CHECK(thrown_code([] { qpm_order(0, 875, 1584); }) == errc::contract);

    const double period = poling_period_um(74.0, 159);
    CHECK(period == doctest::Approx(2.9242497656).epsilon(1e-9));
    // M periods tile the circumference.
    CHECK(period * 159 ==
          doctest::Approx(2.0 * kPi * 74.0).epsilon(1e-13));
    CHECK(thrown_code([] { poling_period_um(74.0, 0); }) ==
          errc::invalid_order);
    CHECK(thrown_code([] { poling_period_um(74.0, -3); }) ==
          errc::invalid_order);
}

TEST_CASE("mode triple energy conservation") {
    // Exact sum-frequency wavelength 1/(1/1533 + 1/1064).
    const double lambda_sf = 1.0 / (1.0 / 1533.0 + 1.0 / 1064.0);
    ModeTriple exact{550, 875, 1584, 1533.0, 1064.0, lambda_sf, 159};
    CHECK_NOTHROW(exact.validate());
    CHECK(exact.lambda_nm(Band::sf) == lambda_sf);
    CHECK(exact.mode_number(Band::pump) == 875);

    // The rounded 631 nm violates the default tolerance but is fine at 5e-3.
    ModeTriple rounded{550, 875, 1584, 1533.0, 1064.0, 631.0, 159};
    CHECK(thrown_code([&] { rounded.validate(); }) ==
          errc::invariant_violation);
    CHECK_NOTHROW(rounded.validate(5e-3));
}

TEST_CASE("conversion ceiling from coupling fractions") {
    CHECK(eta_max_couplings(reference_ring(), reference_couplers()) ==
          doctest::Approx(0.7264141058).epsilon(1e-7));

    // kappa2_sf_B = 0 removes the extraction path entirely.
    CouplerSpec c = reference_couplers();
    c.set_kappa2(Band::sf, Port::B, 0.0);
    CHECK(eta_max_couplings(reference_ring(), c) == 0.0);

    // Balanced couplings, r = 1 on both factors: eta = 1/4.
    RingParams ring = reference_ring();
    const double a_l = alpha_roundtrip(ring);
    CouplerSpec balanced = reference_couplers();
    balanced.set_kappa2(Band::sf, Port::A, 0.01);
    balanced.set_kappa2(Band::sf, Port::B, a_l + 0.01);
    balanced.set_kappa2(Band::signal, Port::B, 0.01);
    balanced.set_kappa2(Band::signal, Port::A, a_l + 0.01);
    CHECK(eta_max_couplings(ring, balanced) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("conversion ceiling: lossless ring with a dark extraction port") {
    RingParams lossless = RingParams::from_radius(74.0, 1.73, 0.0);
    CouplerSpec c = reference_couplers();
    c.set_kappa2(Band::sf, Port::A, 0.0);
    // Finite extraction against zero competing loss is a singular ratio.
    CHECK(thrown_code([&] { eta_max_couplings(lossless, c); }) ==
          errc::singular_ratio);
}

TEST_CASE("conversion ceiling is invariant under common loss scaling") {
    RingParams ring = reference_ring();
    CouplerSpec couplers = reference_couplers();
    const double eta0 = eta_max_couplings(ring, couplers);
    for (double c : {0.5, 2.0, 10.0}) {
        const double eta = eta_max_couplings(ring_with_scaled_loss(ring, c),
                                             scaled_couplers(couplers, c));
        CHECK(eta == doctest::Approx(eta0).epsilon(1e-9));
    }
}

TEST_CASE("conversion ceiling monotonicity in each rate") {
    RingParams ring = reference_ring();
    CouplerSpec base = reference_couplers();
    const double eta0 = eta_max_couplings(ring, base);

    auto bumped = [&](Band band, Port port, double delta) {
        CouplerSpec c = base;
        c.set_kappa2(band, port, c.kappa2_at(band, port) + delta);
        return eta_max_couplings(ring, c);
    };

    CHECK(bumped(Band::sf, Port::B, 0.01) > eta0);     // more extraction
    CHECK(bumped(Band::signal, Port::A, 0.01) > eta0); // more signal input
    CHECK(bumped(Band::sf, Port::A, 0.01) < eta0);     // parasitic sf loss
    CHECK(bumped(Band::signal, Port::B, 0.01) < eta0); // parasitic signal loss

    RingParams lossier = RingParams::from_radius(74.0, 1.73, 0.4);
    CHECK(eta_max_couplings(lossier, base) < eta0);
}

TEST_CASE("conversion ceiling from quality factors") {
    QSet qs;
    qs.signal = {1.01e6, 1.46e5};
    qs.pump = {3.29e6, 5.26e5};
    qs.sf = {8.93e5, 1.64e5};
    CHECK(eta_max_q(qs) == doctest::Approx(0.6983424434).epsilon(1e-7));

    // Critically split Qs waste half the photons at each coupler.
    QSet half;
    half.signal = {2.0e6, 1.0e6};
    half.pump = {2.0e6, 1.0e6};
    half.sf = {2.0e6, 1.0e6};
    CHECK(eta_max_q(half) == doctest::Approx(0.25).epsilon(1e-12));

    qs.signal.q_loaded = 2.0e6; // loaded above intrinsic
    CHECK(thrown_code([&] { eta_max_q(qs); }) == errc::invariant_violation);
}

TEST_CASE("loss-to-Q bridge") {
    RingParams ring = reference_ring();
    QPair q = q_from_losses(2.77, ring, 1533.0, 0.03, 0.004);
    // Loaded Q lands near the measured 1.46e5 for the stated losses.
    CHECK(q.q_loaded == doctest::Approx(1.46e5).epsilon(5e-3));
    // Q ratio equals the loss ratio by construction.
    const double l0 = alpha_roundtrip(ring) + 0.004;
    const double lt = l0 + 0.03;
    CHECK(q.q_intrinsic / q.q_loaded == doctest::Approx(lt / l0).epsilon(1e-12));

    // Doubling every loss channel halves both Qs; alpha = 0 keeps the
    // propagation term out of the way.
    RingParams cold = RingParams::from_radius(74.0, 1.73, 0.0);
    QPair q1 = q_from_losses(2.77, cold, 1533.0, 0.03, 0.004);
    QPair q2 = q_from_losses(2.77, cold, 1533.0, 0.06, 0.008);
    CHECK(q2.q_loaded == doctest::Approx(q1.q_loaded / 2.0).epsilon(1e-12));
    CHECK(q2.q_intrinsic == doctest::Approx(q1.q_intrinsic / 2.0).epsilon(1e-12));

    CHECK(thrown_code([&] { q_from_losses(2.77, ring, 1533.0, 0.6, 0.004); }) ==
          errc::regime);
    CHECK(thrown_code([&] { q_from_losses(2.77, ring, 1533.0, -0.1, 0.004); }) ==
          errc::contract);
}

TEST_CASE("Q-form and coupling-form ceilings agree exactly") {
    RingParams ring = reference_ring();
    CouplerSpec couplers = reference_couplers();
    QSet qs = qset_from_couplings(ring, couplers, {2.77, 2.2, 2.2},
                                  {1533.0, 1064.0, 631.0});
    // The group indices cancel inside each band, so the identity is exact.
    CHECK(eta_max_q(qs) ==
          doctest::Approx(eta_max_couplings(ring, couplers)).epsilon(1e-12));
}

TEST_CASE("pulley gap from index matching") {
    std::vector<IndexAnchor> ring_anchor = {{1533.0, 2.04}};
    std::vector<IndexAnchor> wg_anchor = {{1533.0, 2.0}};
    IndexModel ring_model =
        calibrate(Band::signal, ring_anchor, 0, 1500.0, 1560.0);
    IndexModel wg_model = calibrate(Band::signal, wg_anchor, 0, 1500.0, 1560.0);
    RingParams ring = reference_ring();

    // 1.02 * (74 + 1.73/4) - 74 - 1.73/2 - 0.6/2, evaluated by hand.
    CHECK(pulley_gap_um(ring_model, wg_model, ring, 0.6, 1533.0) ==
          doctest::Approx(0.75615).epsilon(1e-9));

    // A faster ring mode pushes the matching point further out.
    IndexModel faster =
        calibrate(Band::signal, {{1533.0, 2.08}}, 0, 1500.0, 1560.0);
    CHECK(pulley_gap_um(faster, wg_model, ring, 0.6, 1533.0) >
          pulley_gap_um(ring_model, wg_model, ring, 0.6, 1533.0));

    // Equal indices leave no room for a gap.
    CHECK(thrown_code([&] {
              pulley_gap_um(wg_model, wg_model, ring, 0.6, 1533.0);
          }) == errc::no_solution);
}

TEST_CASE("pulley width search inverts the gap relation") {
    RingParams ring = reference_ring();
    IndexModel ring_model =
        calibrate(Band::signal, {{1533.0, 2.2}}, 0, 1500.0, 1560.0);
    auto wg_at = [](double n) {
        return calibrate(Band::signal, {{1533.0, n}}, 0, 1500.0, 1560.0);
    };
    // n_wg(w) = 1.9 + 0.25 w at the sample widths; the searched width sits
    // exactly on the linear interpolant.
    std::vector<WidthIndexModel> widths = {{0.4, wg_at(2.0)}, {0.8, wg_at(2.1)}};
    const double target =
        pulley_gap_um(ring_model, wg_at(2.05), ring, 0.6, 1533.0);
    CHECK(pulley_width_search(ring_model, widths, ring, 1533.0, target) ==
          doctest::Approx(0.6).epsilon(1e-6));

    CHECK(thrown_code([&] {
              pulley_width_search(ring_model, {widths[0]}, ring, 1533.0, target);
          }) == errc::contract);
    std::vector<WidthIndexModel> unsorted = {widths[1], widths[0]};
    CHECK(thrown_code([&] {
              pulley_width_search(ring_model, unsorted, ring, 1533.0, target);
          }) == errc::contract);
    CHECK(thrown_code([&] {
              pulley_width_search(ring_model, widths, ring, 1533.0, 100.0);
          }) == errc::no_solution);
}

TEST_CASE("triple-resonance residuals") {
    IndexModelSet models = default_index_models();
    RingParams ring = reference_ring();
    ModeTriple triple{550, 875, 1584, 1533.0, 1064.0, 631.0, 159};

    auto r = triple_resonance_residual(models, ring, triple);
    CHECK(std::abs(r.signal) < 1e-9);
    CHECK(std::abs(r.pump) < 1e-9);
    CHECK(std::abs(r.sf) < 1e-9);
    CHECK(r.within(1e-3));

    // Half an FSR off resonance costs half a mode number.
    ModeTriple shifted = triple;
    shifted.lambda_s_nm = 1533.0 + 1533.0 / 1100.0;
    auto rs = triple_resonance_residual(models, ring, shifted);
    CHECK(std::abs(rs.signal + 0.5) < 1e-3);
    CHECK_FALSE(rs.within(1e-3));

    // A misassigned mode number shows up as a full integer.
    ModeTriple wrong_m = triple;
    wrong_m.m_s = 551;
    auto rm = triple_resonance_residual(models, ring, wrong_m);
    CHECK(std::abs(rm.signal + 1.0) < 1e-9);
}
