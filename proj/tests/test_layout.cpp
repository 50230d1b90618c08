#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "qfc/common.hpp"
#include "qfc/layout.hpp"

using namespace qfc;

namespace {

EulerBendSpec reference_bend() {
    EulerBendSpec spec;
    spec.r_max_um = 300.0;
    spec.r_min_um = 28.5;
    spec.total_angle_rad = kPi / 2.0;
    spec.width_nm = 800.0;
    return spec;
}

// Tangent angle of the symmetric clothoid in closed form, for use as an
// integrand independent of the RK4 path integration.
double theta_closed(const EulerBendSpec& spec, double s) {
    const double s_total = bend_arc_length_um(spec);
    const double s_half = s_total / 2.0;
    const double k_min = 1.0 / spec.r_max_um;
    const double k_max = 1.0 / spec.r_min_um;
    auto first_half = [&](double u) {
        return k_min * u + (k_max - k_min) * u * u / (2.0 * s_half);
    };
    if (s <= s_half) {
        return first_half(s);
    }
    return spec.total_angle_rad - first_half(s_total - s);
}

// Composite Simpson quadrature of f over [a, b] with 2n intervals.
template <typename F>
double simpson(const F& f, double a, double b, int n) {
    const double h = (b - a) / (2.0 * n);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * n; ++i) {
        sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

} // namespace

TEST_CASE("bend arc length") {
    // 2 * (pi/2) / (1/300 + 1/28.5), evaluated by hand.
    CHECK(bend_arc_length_um(reference_bend()) ==
          doctest::Approx(81.76748).epsilon(1e-6));

    // A degenerate clothoid is a circular arc of length R*angle.
    EulerBendSpec arc;
    arc.r_max_um = 50.0;
    arc.r_min_um = 50.0;
    arc.total_angle_rad = kPi / 2.0;
    CHECK(bend_arc_length_um(arc) ==
          doctest::Approx(50.0 * kPi / 2.0).epsilon(1e-12));

    // Homogeneous of degree one in the radii, linear in the angle.
    EulerBendSpec big = reference_bend();
    big.r_max_um *= 2.0;
    big.r_min_um *= 2.0;
    CHECK(bend_arc_length_um(big) ==
          doctest::Approx(2.0 * bend_arc_length_um(reference_bend()))
              .epsilon(1e-12));
    EulerBendSpec half_angle = reference_bend();
    half_angle.total_angle_rad /= 2.0;
    CHECK(bend_arc_length_um(half_angle) ==
          doctest::Approx(0.5 * bend_arc_length_um(reference_bend()))
              .epsilon(1e-12));
}

TEST_CASE("bend spec validation") {
    EulerBendSpec spec = reference_bend();
    spec.r_max_um = 10.0; // below r_min
    CHECK(thrown_code([&] { spec.validate(); }) == errc::invariant_violation);
    spec = reference_bend();
    spec.total_angle_rad = 0.0;
    CHECK(thrown_code([&] { spec.validate(); }) == errc::invariant_violation);
    spec.total_angle_rad = 4.0; // over pi
    CHECK(thrown_code([&] { spec.validate(); }) == errc::invariant_violation);
    CHECK(thrown_code([&] { euler_bend_path(reference_bend(), 63); }) ==
          errc::contract);
}

TEST_CASE("bend path boundary values and curvature profile") {
    EulerBendSpec spec = reference_bend();
    PathPolyline path = euler_bend_path(spec, 4097);
    path.validate();
    REQUIRE(path.size() == 4097);

    CHECK(path.x_um.front() == 0.0);
    CHECK(path.y_um.front() == 0.0);
    CHECK(path.theta_rad.front() == 0.0);
    // The angle quadrature is exact, so the final tangent is 90 degrees to
    // round-off, far inside the 1e-6 budget.
    CHECK(std::abs(path.theta_rad.back() - kPi / 2.0) <= 1e-9);
    CHECK(path.s_um.back() ==
          doctest::Approx(bend_arc_length_um(spec)).epsilon(1e-12));

    // Gentle at the ports, tightest at the apex, linear in between.
    CHECK(path.curvature_per_um.front() == doctest::Approx(1.0 / 300.0));
    CHECK(path.curvature_per_um.back() == doctest::Approx(1.0 / 300.0));
    CHECK(path.curvature_per_um[2048] == doctest::Approx(1.0 / 28.5));
    const double quarter_k = 0.5 * (1.0 / 300.0 + 1.0 / 28.5);
    CHECK(path.curvature_per_um[1024] ==
          doctest::Approx(quarter_k).epsilon(1e-12));
    for (std::size_t i = 0; i < path.size(); ++i) {
        CHECK(path.curvature_per_um[i] >= 1.0 / 300.0 - 1e-15);
        CHECK(path.curvature_per_um[i] <= 1.0 / 28.5 + 1e-15);
    }
}

TEST_CASE("trapezoid of the sampled curvature recovers the total angle") {
    PathPolyline path = euler_bend_path(reference_bend(), 4097);
    double integral = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        integral += 0.5 *
                    (path.curvature_per_um[i] + path.curvature_per_um[i - 1]) *
                    (path.s_um[i] - path.s_um[i - 1]);
    }
    CHECK(std::abs(integral - kPi / 2.0) <= 1e-6);
}

TEST_CASE("bend endpoint agrees with independent quadrature") {
    EulerBendSpec spec = reference_bend();
    const double s_total = bend_arc_length_um(spec);
    auto fx = [&](double s) { return std::cos(theta_closed(spec, s)); };
    auto fy = [&](double s) { return std::sin(theta_closed(spec, s)); };
    // Integrate each smooth half separately.
    const double x_ref = simpson(fx, 0.0, s_total / 2.0, 50000) +
                         simpson(fx, s_total / 2.0, s_total, 50000);
    const double y_ref = simpson(fy, 0.0, s_total / 2.0, 50000) +
                         simpson(fy, s_total / 2.0, s_total, 50000);

    PathPolyline path = euler_bend_path(spec, 4097);
    CHECK(std::abs(path.x_um.back() - x_ref) <= 1e-9);
    CHECK(std::abs(path.y_um.back() - y_ref) <= 1e-9);

    // Frozen values for the stock 300/28.5 quarter bend.
    CHECK(path.x_um.back() == doctest::Approx(49.3345038).epsilon(1e-7));
    CHECK(path.y_um.back() == doctest::Approx(49.3345038).epsilon(1e-7));
}

TEST_CASE("bend path is converged at the default sampling") {
    PathPolyline coarse = euler_bend_path(reference_bend(), 2049);
    PathPolyline fine = euler_bend_path(reference_bend(), 4097);
    CHECK(std::abs(coarse.x_um.back() - fine.x_um.back()) < 1e-4);
    CHECK(std::abs(coarse.y_um.back() - fine.y_um.back()) < 1e-4);
}

TEST_CASE("cumulative chords agree with the analytic arc length") {
    PathPolyline path = euler_bend_path(reference_bend(), 4096);
    double chords = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        chords += std::hypot(path.x_um[i] - path.x_um[i - 1],
                             path.y_um[i] - path.y_um[i - 1]);
    }
    const double s_total = bend_arc_length_um(reference_bend());
    CHECK(std::abs(chords - s_total) / s_total < 1e-4);
}

TEST_CASE("bend is mirror-symmetric about the apex normal") {
    PathPolyline path = euler_bend_path(reference_bend(), 4097);
    const std::size_t mid = 2048;
    const double mx = path.x_um[mid];
    const double my = path.y_um[mid];
    const double phi = path.theta_rad[mid] + kPi / 2.0;
    const double ax = std::cos(phi);
    const double ay = std::sin(phi);

    double worst = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const std::size_t j = path.size() - 1 - i;
        const double vx = path.x_um[i] - mx;
        const double vy = path.y_um[i] - my;
        const double dot = vx * ax + vy * ay;
        const double rx = mx + 2.0 * dot * ax - vx;
        const double ry = my + 2.0 * dot * ay - vy;
        worst = std::max(worst,
                         std::hypot(rx - path.x_um[j], ry - path.y_um[j]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("effective radius") {
    // Exact quarter circle of radius 50, built analytically.
    PathPolyline circle;
    for (int i = 0; i <= 256; ++i) {
        const double t = kPi / 2.0 * i / 256.0;
        circle.s_um.push_back(50.0 * t);
        circle.x_um.push_back(50.0 * std::sin(t));
        circle.y_um.push_back(50.0 * (1.0 - std::cos(t)));
        circle.theta_rad.push_back(t);
        circle.curvature_per_um.push_back(1.0 / 50.0);
    }
    CHECK(effective_radius_um(circle) == doctest::Approx(50.0).epsilon(1e-12));

    // Homogeneous under coordinate scaling.
    PathPolyline doubled = circle;
    for (auto& v : doubled.x_um) v *= 2.0;
    for (auto& v : doubled.y_um) v *= 2.0;
    for (auto& v : doubled.s_um) v *= 2.0;
    CHECK(effective_radius_um(doubled) ==
          doctest::Approx(100.0).epsilon(1e-12));

    // The compact Euler bend behaves like a much smaller quarter circle.
    PathPolyline bend = euler_bend_path(reference_bend(), 4097);
    const double r_eff = effective_radius_um(bend);
    CHECK(r_eff == doctest::Approx(49.3345).epsilon(1e-4));
    CHECK(std::abs(r_eff - 50.0) / 50.0 < 0.10);

    // Anything that is not a quarter turn is rejected.
    EulerBendSpec eighth = reference_bend();
    eighth.total_angle_rad = kPi / 4.0;
    PathPolyline part = euler_bend_path(eighth, 257);
    CHECK(thrown_code([&] { effective_radius_um(part); }) == errc::contract);
}

TEST_CASE("taper profile") {
    TaperSpec spec;
    spec.w_in_nm = 300.0;
    spec.w_out_nm = 950.0;
    spec.length_um = 4.0;
    spec.kind = TaperKind::abrupt;
    spec.quoted_loss_db = 0.24;

    PathPolyline path = taper_profile(spec, 65);
    path.validate();
    REQUIRE(path.size() == 65);
    CHECK(path.width_nm.front() == 300.0);
    CHECK(path.width_nm.back() == 950.0);
    CHECK(path.width_nm[32] == doctest::Approx(625.0).epsilon(1e-12));
    CHECK(path.s_um.back() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(path.x_um.back() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(path.y_um.back() == 0.0);
    REQUIRE(path.quoted_loss_db.has_value());
    CHECK(*path.quoted_loss_db == doctest::Approx(0.24));

    // The adiabatic variant is simply much longer at lower quoted loss.
    TaperSpec gentle = spec;
    gentle.kind = TaperKind::adiabatic;
    gentle.length_um = 300.0;
    gentle.quoted_loss_db = 0.01;
    PathPolyline long_path = taper_profile(gentle, 65);
    CHECK(long_path.s_um.back() == doctest::Approx(300.0));
    const double slope_per_um = (long_path.width_nm[1] - long_path.width_nm[0]) /
                                (long_path.s_um[1] - long_path.s_um[0]);
    CHECK(slope_per_um == doctest::Approx(650.0 / 300.0).epsilon(1e-9));

    CHECK(thrown_code([&] { taper_profile(spec, 1); }) == errc::contract);
    spec.w_in_nm = 0.0;
    CHECK(thrown_code([&] { taper_profile(spec, 65); }) ==
          errc::invariant_violation);
}

TEST_CASE("taper kind names round-trip") {
    CHECK(taper_kind_from_string(to_string(TaperKind::abrupt)) ==
          TaperKind::abrupt);
    CHECK(taper_kind_from_string(to_string(TaperKind::adiabatic)) ==
          TaperKind::adiabatic);
    CHECK(thrown_code([] { taper_kind_from_string("linear"); }) ==
          errc::config);
}

TEST_CASE("path polyline validation") {
    PathPolyline p;
    p.s_um = {0.0, 1.0};
    p.x_um = {0.0, 1.0};
    p.y_um = {0.0, 0.0};
    p.theta_rad = {0.0, 0.0};
    p.curvature_per_um = {0.0, 0.0};
    CHECK_NOTHROW(p.validate());

    p.s_um = {0.0, 0.0};
    CHECK(thrown_code([&] { p.validate(); }) == errc::invariant_violation);
    p.s_um = {0.0, 1.0};
    p.theta_rad = {0.0};
    CHECK(thrown_code([&] { p.validate(); }) == errc::invariant_violation);
}
