#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qfc {

// Symmetric clothoid bend: curvature runs linearly from 1/r_max up to 1/r_min
// at the arc-length midpoint and back down. r_max == r_min degenerates to a
// circular arc, which is permitted.
struct EulerBendSpec {
    double r_max_um = 0.0;
    double r_min_um = 0.0;
    double total_angle_rad = 0.0;
    double width_nm = 0.0;

    void validate() const;
};

enum class TaperKind { abrupt, adiabatic };

std::string to_string(TaperKind kind);
TaperKind taper_kind_from_string(const std::string& text);

struct TaperSpec {
    double w_in_nm = 0.0;
    double w_out_nm = 0.0;
    double length_um = 0.0;
    TaperKind kind = TaperKind::abrupt;
    // Carried as data; computing it needs eigenmode expansion.
    double quoted_loss_db = 0.0;

    void validate() const;
};

struct PathPolyline {
    std::vector<double> s_um;
    std::vector<double> x_um;
    std::vector<double> y_um;
    std::vector<double> theta_rad;
    std::vector<double> curvature_per_um;
    // Present only for profiles with a width channel.
    std::vector<double> width_nm;
    std::optional<double> quoted_loss_db;

    std::size_t size() const { return s_um.size(); }
    void validate() const;
};

// s_total = 2 * total_angle / (1/r_max + 1/r_min): the mean curvature over a
// symmetric linear ramp is the midpoint of its endpoints.
double bend_arc_length_um(const EulerBendSpec& spec);

// RK4 integration of x' = cos(theta), y' = sin(theta), theta' = k(s), with
// steps split at the curvature apex so no step straddles the kink. The angle
// quadrature is then exact (Simpson on a piecewise-linear integrand), making
// the final tangent equal total_angle to round-off.
PathPolyline euler_bend_path(const EulerBendSpec& spec, std::size_t n_samples);

// Radius of the 90 degree circular arc with the same endpoint displacement,
// max(|dx|, |dy|). Rejects paths whose net rotation is not 90 degrees.
double effective_radius_um(const PathPolyline& path,
                           double angle_tol_rad = 1e-6);

// Straight run along +x with the width interpolated linearly.
PathPolyline taper_profile(const TaperSpec& spec, std::size_t n_samples);

} // namespace qfc
