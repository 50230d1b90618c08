#include "qfc/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfc/detail/linalg.hpp"
#include "qfc/errors.hpp"
#include "qfc/log.hpp"

namespace qfc {

namespace {

constexpr int kMaxDegree = 4;
constexpr double kDefaultRangePadNm = 10.0;

std::string range_text(const IndexModel& model) {
    std::ostringstream out;
    out << "[" << model.range_lo_nm << ", " << model.range_hi_nm << "] nm";
    return out.str();
}

void check_in_range(const IndexModel& model, double lambda_nm, bool strict) {
    const bool inside = strict
        ? (lambda_nm > model.range_lo_nm && lambda_nm < model.range_hi_nm)
        : (lambda_nm >= model.range_lo_nm && lambda_nm <= model.range_hi_nm);
    if (!inside) {
        std::ostringstream out;
        out << "wavelength " << lambda_nm << " nm outside " << to_string(model.band)
            << " model range " << range_text(model);
        fail(errc::range, out.str());
    }
}

double horner(const std::vector<double>& coeffs, double t) {
    double value = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        value = value * t + coeffs[i];
    }
    return value;
}

double horner_derivative(const std::vector<double>& coeffs, double t) {
    double value = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) {
        value = value * t + coeffs[i] * static_cast<double>(i);
    }
    return value;
}

} // namespace

void WaveguideXSection::validate() const {
    if (!(film_thickness_nm > 0.0) || !(etch_depth_nm > 0.0) || !(top_width_nm > 0.0)) {
        fail(errc::invariant_violation, "waveguide cross-section lengths must be positive");
    }
    if (etch_depth_nm > film_thickness_nm) {
        fail(errc::invariant_violation, "etch depth exceeds film thickness");
    }
}

void IndexModel::validate() const {
    if (coeffs.empty()) {
        fail(errc::invariant_violation, "index model has no coefficients");
    }
    if (coeffs.size() > static_cast<std::size_t>(kMaxDegree) + 1) {
        fail(errc::invariant_violation, "index model degree exceeds 4");
    }
    if (!(range_lo_nm < range_hi_nm)) {
        fail(errc::invariant_violation, "index model valid range is empty");
    }
    // n_eff > 1 over the whole range; a degree-4 polynomial is tame enough
    // for a dense sample check.
    constexpr int kSamples = 257;
    for (int i = 0; i < kSamples; ++i) {
        const double lambda = range_lo_nm +
            (range_hi_nm - range_lo_nm) * static_cast<double>(i) / (kSamples - 1);
        if (!(horner(coeffs, lambda - center_nm) > 1.0)) {
            std::ostringstream out;
            out << to_string(band) << " index model drops to n <= 1 near "
                << lambda << " nm";
            fail(errc::invariant_violation, out.str());
        }
    }
}

bool IndexModel::is_constant() const {
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0.0) {
            return false;
        }
    }
    return true;
}

double n_eff(const IndexModel& model, double lambda_nm) {
    check_in_range(model, lambda_nm, /*strict=*/false);
    return horner(model.coeffs, lambda_nm - model.center_nm);
}

double n_group(const IndexModel& model, double lambda_nm) {
    check_in_range(model, lambda_nm, /*strict=*/true);
    const double t = lambda_nm - model.center_nm;
    return horner(model.coeffs, t) - lambda_nm * horner_derivative(model.coeffs, t);
}

GroupIndexResult n_group_or_fallback(const IndexModel& model, double lambda_nm,
                                     double fallback) {
    if (model.is_constant()) {
        log_warn(std::string(to_string(model.band)) +
                 " index model is constant; using group-index fallback");
        return {fallback, true};
    }
    return {n_group(model, lambda_nm), false};
}

double resonant_index(int m, double lambda_nm, double radius_um) {
    if (m <= 0 || !(lambda_nm > 0.0) || !(radius_um > 0.0)) {
        fail(errc::contract, "resonant_index requires m, lambda, R > 0");
    }
    return static_cast<double>(m) * lambda_nm / (2.0 * kPi * radius_um * 1000.0);
}

IndexModel calibrate(Band band, const std::vector<IndexAnchor>& anchors, int degree) {
    double lo = anchors.empty() ? 0.0 : anchors.front().lambda_nm;
    double hi = lo;
    for (const auto& a : anchors) {
        lo = std::min(lo, a.lambda_nm);
        hi = std::max(hi, a.lambda_nm);
    }
    return calibrate(band, anchors, degree, lo - kDefaultRangePadNm, hi + kDefaultRangePadNm);
}

IndexModel calibrate(Band band, const std::vector<IndexAnchor>& anchors, int degree,
                     double range_lo_nm, double range_hi_nm) {
    if (degree < 0 || degree > kMaxDegree) {
        fail(errc::contract, "calibration degree must be in [0, 4]");
    }
    if (anchors.size() < static_cast<std::size_t>(degree) + 1) {
        fail(errc::contract, "calibration needs at least degree+1 anchors");
    }
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
            if (anchors[i].lambda_nm == anchors[j].lambda_nm) {
                fail(errc::degenerate_input, "duplicate anchor wavelengths in calibration");
            }
        }
    }

    double center = 0.0;
    for (const auto& a : anchors) {
        center += a.lambda_nm;
    }
    center /= static_cast<double>(anchors.size());

    // Normal equations of the Vandermonde least-squares problem; fine at
    // degree <= 4 over the few-nm spans these models cover.
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    std::vector<double> ata(n * n, 0.0);
    std::vector<double> atb(n, 0.0);
    for (const auto& a : anchors) {
        const double t = a.lambda_nm - center;
        std::vector<double> row(n);
        row[0] = 1.0;
        for (std::size_t k = 1; k < n; ++k) {
            row[k] = row[k - 1] * t;
        }
        for (std::size_t i = 0; i < n; ++i) {
            atb[i] += row[i] * a.n;
            for (std::size_t j = 0; j < n; ++j) {
                ata[i * n + j] += row[i] * row[j];
            }
        }
    }
    if (!detail::solve_dense(ata, atb, n)) {
        fail(errc::degenerate_input, "calibration system is singular");
    }

    IndexModel model;
    model.band = band;
    model.center_nm = center;
    model.coeffs = std::move(atb);
    model.range_lo_nm = range_lo_nm;
    model.range_hi_nm = range_hi_nm;
    model.validate();
    return model;
}

const IndexModel& IndexModelSet::for_band(Band band) const {
    switch (band) {
        case Band::signal: return signal;
        case Band::pump: return pump;
        case Band::sf: return sf;
    }
    return signal;
}

IndexModel& IndexModelSet::for_band(Band band) {
    switch (band) {
        case Band::signal: return signal;
        case Band::pump: return pump;
        case Band::sf: return sf;
    }
    return signal;
}

IndexModelSet default_index_models() {
    constexpr double kRadiusUm = 74.0;
    IndexModelSet set;
    set.signal = calibrate(Band::signal, {{1533.0, resonant_index(550, 1533.0, kRadiusUm)}},
                           0, 1513.0, 1553.0);
    set.pump = calibrate(Band::pump, {{1064.0, resonant_index(875, 1064.0, kRadiusUm)}},
                         0, 1044.0, 1084.0);
    set.sf = calibrate(Band::sf, {{631.0, resonant_index(1584, 631.0, kRadiusUm)}},
                       0, 611.0, 651.0);
    return set;
}

} // namespace qfc
