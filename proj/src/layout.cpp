#include "qfc/layout.hpp"

#include <cmath>

#include "qfc/common.hpp"
#include "qfc/errors.hpp"

namespace qfc {

namespace {

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

// One RK4 step of the planar Frenet system; k must be callable at s, s+h/2,
// and s+h without crossing a curvature kink.
template <typename K>
Pose rk4_step(const Pose& p, double s, double h, const K& k) {
    auto deriv = [&](double si, double theta) {
        return Pose{std::cos(theta), std::sin(theta), k(si)};
    };
    const Pose k1 = deriv(s, p.theta);
    const Pose k2 = deriv(s + h / 2.0, p.theta + h / 2.0 * k1.theta);
    const Pose k3 = deriv(s + h / 2.0, p.theta + h / 2.0 * k2.theta);
    const Pose k4 = deriv(s + h, p.theta + h * k3.theta);
    return Pose{
        p.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        p.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        p.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
    };
}

} // namespace

void EulerBendSpec::validate() const {
    if (!(r_min_um > 0.0) || r_max_um < r_min_um) {
        fail(errc::invariant_violation, "need r_max >= r_min > 0");
    }
    if (!(total_angle_rad > 0.0) || total_angle_rad > kPi) {
        fail(errc::invariant_violation, "total angle must be in (0, pi]");
    }
    if (width_nm < 0.0) {
        fail(errc::invariant_violation, "width must be non-negative");
    }
}

std::string to_string(TaperKind kind) {
    return kind == TaperKind::abrupt ? "abrupt" : "adiabatic";
}

TaperKind taper_kind_from_string(const std::string& text) {
    if (text == "abrupt") return TaperKind::abrupt;
    if (text == "adiabatic") return TaperKind::adiabatic;
    fail(errc::config, "unknown taper kind '" + text + "'");
}

void TaperSpec::validate() const {
    if (!(w_in_nm > 0.0) || !(w_out_nm > 0.0) || !(length_um > 0.0)) {
        fail(errc::invariant_violation, "taper lengths must be positive");
    }
    if (quoted_loss_db < 0.0) {
        fail(errc::invariant_violation, "quoted loss must be non-negative");
    }
}

void PathPolyline::validate() const {
    const std::size_t n = s_um.size();
    if (n < 2) {
        fail(errc::invariant_violation, "path needs at least two samples");
    }
    if (x_um.size() != n || y_um.size() != n || theta_rad.size() != n ||
        curvature_per_um.size() != n ||
        (!width_nm.empty() && width_nm.size() != n)) {
        fail(errc::invariant_violation, "path channel lengths differ");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(s_um[i] > s_um[i - 1])) {
            fail(errc::invariant_violation, "arc length must be strictly increasing");
        }
        if (!std::isfinite(curvature_per_um[i]) || !std::isfinite(x_um[i]) ||
            !std::isfinite(y_um[i]) || !std::isfinite(theta_rad[i])) {
            fail(errc::invariant_violation, "path sample not finite");
        }
    }
}

double bend_arc_length_um(const EulerBendSpec& spec) {
    spec.validate();
    return 2.0 * spec.total_angle_rad / (1.0 / spec.r_max_um + 1.0 / spec.r_min_um);
}

PathPolyline euler_bend_path(const EulerBendSpec& spec, std::size_t n_samples) {
    spec.validate();
    if (n_samples < 64) {
        fail(errc::contract, "bend path needs at least 64 samples");
    }
    const double s_total = bend_arc_length_um(spec);
    const double s_half = s_total / 2.0;
    const double k_max = 1.0 / spec.r_min_um;
    const double k_min = 1.0 / spec.r_max_um;
    auto k = [&](double s) {
        const double ramp = s <= s_half ? s / s_half : (s_total - s) / s_half;
        return k_min + (k_max - k_min) * ramp;
    };

    PathPolyline path;
    path.s_um.reserve(n_samples);
    path.x_um.reserve(n_samples);
    path.y_um.reserve(n_samples);
    path.theta_rad.reserve(n_samples);
    path.curvature_per_um.reserve(n_samples);

    Pose pose;
    double s = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double s_target =
            s_total * static_cast<double>(i) / static_cast<double>(n_samples - 1);
        if (i > 0) {
            if (s < s_half && s_target > s_half) {
                pose = rk4_step(pose, s, s_half - s, k);
                s = s_half;
            }
            pose = rk4_step(pose, s, s_target - s, k);
            s = s_target;
        }
        path.s_um.push_back(s_target);
        path.x_um.push_back(pose.x);
        path.y_um.push_back(pose.y);
        path.theta_rad.push_back(pose.theta);
        path.curvature_per_um.push_back(k(s_target));
    }
    return path;
}

double effective_radius_um(const PathPolyline& path, double angle_tol_rad) {
    path.validate();
    const double rotation = path.theta_rad.back() - path.theta_rad.front();
    if (std::fabs(std::fabs(rotation) - kPi / 2.0) > angle_tol_rad) {
        fail(errc::contract,
             "effective radius is defined for 90 degree bends only");
    }
    const double dx = std::fabs(path.x_um.back() - path.x_um.front());
    const double dy = std::fabs(path.y_um.back() - path.y_um.front());
    return std::max(dx, dy);
}

PathPolyline taper_profile(const TaperSpec& spec, std::size_t n_samples) {
    spec.validate();
    if (n_samples < 2) {
        fail(errc::contract, "taper profile needs at least 2 samples");
    }
    PathPolyline path;
    path.quoted_loss_db = spec.quoted_loss_db;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t =
            static_cast<double>(i) / static_cast<double>(n_samples - 1);
        path.s_um.push_back(t * spec.length_um);
        path.x_um.push_back(t * spec.length_um);
        path.y_um.push_back(0.0);
        path.theta_rad.push_back(0.0);
        path.curvature_per_um.push_back(0.0);
        path.width_nm.push_back(spec.w_in_nm + t * (spec.w_out_nm - spec.w_in_nm));
    }
    return path;
}

} // namespace qfc
