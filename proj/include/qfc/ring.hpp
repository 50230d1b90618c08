#pragma once

#include <array>
#include <vector>

#include "qfc/common.hpp"
#include "qfc/dispersion.hpp"

namespace qfc {

// Geometry and loss state of the microring.
struct RingParams {
    double radius_um = 0.0;
    double w_ring_um = 0.0;
    double alpha_db_per_cm = 0.0;
    double circumference_um = 0.0;

    static RingParams from_radius(double radius_um, double w_ring_um,
                                  double alpha_db_per_cm);
    void validate() const;
};

struct PortGeometry {
    double w_wg_nm = 0.0;
    double gap_nm = 0.0;
};

// Round-trip power coupling fractions kappa^2 per band and coupler, plus the
// pulley geometry per port. kappa^2 values come from 3D field simulation and
// are inputs here, never computed.
struct CouplerSpec {
    std::array<std::array<double, 2>, 3> kappa2{};
    std::array<PortGeometry, 2> geometry{};

    double kappa2_at(Band band, Port port) const;
    void set_kappa2(Band band, Port port, double value);
    void validate() const;
};

// A triple-resonant mode assignment. Energy conservation between the
// wavelengths is enforced to a configurable relative tolerance since quoted
// wavelengths are usually rounded.
struct ModeTriple {
    int m_s = 0;
    int m_p = 0;
    int m_sf = 0;
    double lambda_s_nm = 0.0;
    double lambda_p_nm = 0.0;
    double lambda_sf_nm = 0.0;
    int poling_order = 0;

    void validate(double energy_tol_rel = 1e-4) const;
    double lambda_nm(Band band) const;
    int mode_number(Band band) const;
};

struct QPair {
    double q_intrinsic = 0.0;
    double q_loaded = 0.0;

    void validate() const;
};

struct QSet {
    QPair signal;
    QPair pump;
    QPair sf;

    const QPair& for_band(Band band) const;
    void validate() const;
};

// Quasi-phase-matching order M = m_sf - m_s - m_p.
int qpm_order(int m_s, int m_p, int m_sf);
int qpm_order(const ModeTriple& triple);

// Azimuthal poling period along the circumference, 2*pi*R/M.
double poling_period_um(double radius_um, int order);

// Fractional round-trip power loss 1 - 10^(-alpha*L/10) with alpha*L in dB.
double alpha_roundtrip(const RingParams& ring);

// Maximum conversion efficiency of the double-pulley add-drop ring,
//   eta = (r_sf/(1+r_sf)) * (r_s/(1+r_s)),
// with r_sf = k2_sf_B/(aL + k2_sf_A) and r_s = k2_s_A/(aL + k2_s_B), where aL
// is the fractional round-trip propagation loss.
double eta_max_couplings(const RingParams& ring, const CouplerSpec& couplers);

// Same maximum in Q-factor form, (1 - Q_s_l/Q_s_0)(1 - Q_sf_l/Q_sf_0).
double eta_max_q(const QSet& qs);

// Bridges round-trip fractional losses to quality factors in the small-loss
// regime Q = 2*pi*n_g*L/(lambda*l). `coupling_loss` is the kappa^2 of the
// band's designated external port and is excluded from the intrinsic Q;
// `other_loss` covers everything else beyond propagation (for signal/pump the
// coupler-B kappa^2, for SF the coupler-A kappa^2) and counts as intrinsic.
QPair q_from_losses(double n_group, const RingParams& ring, double lambda_nm,
                    double coupling_loss, double other_loss);

// Full Q-set from the coupler spec using the port convention above.
QSet qset_from_couplings(const RingParams& ring, const CouplerSpec& couplers,
                         const std::array<double, 3>& n_group_per_band,
                         const std::array<double, 3>& lambda_nm_per_band);

// Pulley-coupler index-matching relation solved for the gap:
//   n_ring*(R + w_ring/4) = n_wg*(R + gap + w_ring/2 + w_wg/2).
double pulley_gap_um(const IndexModel& ring_model, const IndexModel& wg_model,
                     const RingParams& ring, double w_wg_um, double lambda_nm);

struct WidthIndexModel {
    double w_wg_um = 0.0;
    IndexModel model;
};

// Approximate inverse of pulley_gap_um: finds the bus width whose gap matches
// `target_gap_um` by bisection, interpolating n_wg linearly between the
// supplied per-width models (sorted by width, gap must bracket the target).
double pulley_width_search(const IndexModel& ring_model,
                           const std::vector<WidthIndexModel>& wg_models,
                           const RingParams& ring, double lambda_nm,
                           double target_gap_um);

struct TripleResonanceResiduals {
    double signal = 0.0;
    double pump = 0.0;
    double sf = 0.0;

    bool within(double tol = 1e-3) const;
};

// Residual per band of the resonance condition, 2*pi*R*n_eff(lambda)/lambda - m.
TripleResonanceResiduals triple_resonance_residual(const IndexModelSet& models,
                                                   const RingParams& ring,
                                                   const ModeTriple& triple);

} // namespace qfc
