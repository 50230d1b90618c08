#pragma once

#include <vector>

#include "qfc/common.hpp"

namespace qfc {

// Fabricated cross-section of the thin-film waveguide. Carried as design
// metadata; the index models below are calibrated per band for one fixed
// cross-section rather than solved from it.
struct WaveguideXSection {
    double film_thickness_nm = 0.0;
    double etch_depth_nm = 0.0;
    double top_width_nm = 0.0;

    void validate() const;
};

// Effective-index model of the quasi-TM fundamental mode over a narrow band:
// n_eff(lambda) = sum_k coeffs[k] * (lambda - center_nm)^k, degree <= 4,
// valid only inside [range_lo_nm, range_hi_nm].
struct IndexModel {
    Band band = Band::signal;
    double center_nm = 0.0;
    std::vector<double> coeffs;
    double range_lo_nm = 0.0;
    double range_hi_nm = 0.0;

    void validate() const;
    bool is_constant() const;
};

double n_eff(const IndexModel& model, double lambda_nm);

// n_g = n_eff - lambda * dn_eff/dlambda, derivative taken analytically from
// the polynomial. Requires lambda strictly inside the valid range.
double n_group(const IndexModel& model, double lambda_nm);

struct GroupIndexResult {
    double value = 0.0;
    bool from_fallback = false;
};

// Group index for FSR and Q-factor conversions. A constant model has zero
// slope and would return n_g = n_eff, which is physically wrong for these
// uses, so the supplied fallback is substituted and flagged.
GroupIndexResult n_group_or_fallback(const IndexModel& model, double lambda_nm,
                                     double fallback = 2.2);

// Inverts the ring resonance condition m = 2*pi*R*n_eff/lambda for the index:
// n = m*lambda/(2*pi*R).
double resonant_index(int m, double lambda_nm, double radius_um);

struct IndexAnchor {
    double lambda_nm = 0.0;
    double n = 0.0;
};

// Least-squares polynomial fit of degree `degree` about the mean anchor
// wavelength. With exactly degree+1 anchors this interpolates. The valid
// range defaults to the anchor span padded by 10 nm.
IndexModel calibrate(Band band, const std::vector<IndexAnchor>& anchors, int degree);
IndexModel calibrate(Band band, const std::vector<IndexAnchor>& anchors, int degree,
                     double range_lo_nm, double range_hi_nm);

struct IndexModelSet {
    IndexModel signal;
    IndexModel pump;
    IndexModel sf;

    const IndexModel& for_band(Band band) const;
    IndexModel& for_band(Band band);
};

// Constant per-band models anchored so that the stock ring geometry resonates
// at the stock mode numbers (m = 550, 875, 1584 at R = 74 um).
IndexModelSet default_index_models();

} // namespace qfc
