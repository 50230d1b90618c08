#include "qfc/ring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

namespace {

std::size_t band_index(Band band) {
    return static_cast<std::size_t>(band);
}

std::size_t port_index(Port port) {
    return static_cast<std::size_t>(port);
}

double saturation_ratio(double numerator, double denominator) {
    if (denominator <= 0.0) {
        if (numerator > 0.0) {
            fail(errc::singular_ratio,
                 "coupling-to-loss ratio is singular (zero internal loss denominator)");
        }
        return 0.0;
    }
    const double r = numerator / denominator;
    return r / (1.0 + r);
}

} // namespace

RingParams RingParams::from_radius(double radius_um, double w_ring_um,
                                   double alpha_db_per_cm) {
    RingParams p;
    p.radius_um = radius_um;
    p.w_ring_um = w_ring_um;
    p.alpha_db_per_cm = alpha_db_per_cm;
    p.circumference_um = 2.0 * kPi * radius_um;
    p.validate();
    return p;
}

void RingParams::validate() const {
    if (!(radius_um > 0.0)) {
        fail(errc::invariant_violation, "ring radius must be positive");
    }
    if (alpha_db_per_cm < 0.0) {
        fail(errc::invariant_violation, "propagation loss must be non-negative");
    }
    const double expected = 2.0 * kPi * radius_um;
    if (std::fabs(circumference_um - expected) > 1e-9 * expected) {
        fail(errc::invariant_violation, "circumference is not 2*pi*R");
    }
}

double CouplerSpec::kappa2_at(Band band, Port port) const {
    return kappa2[band_index(band)][port_index(port)];
}

void CouplerSpec::set_kappa2(Band band, Port port, double value) {
    kappa2[band_index(band)][port_index(port)] = value;
}

void CouplerSpec::validate() const {
    for (const auto& per_band : kappa2) {
        for (double k2 : per_band) {
            if (!(k2 >= 0.0) || !(k2 < 1.0)) {
                fail(errc::invariant_violation,
                     "coupling strength kappa^2 must be in [0, 1)");
            }
        }
    }
}

void ModeTriple::validate(double energy_tol_rel) const {
    if (m_s <= 0 || m_p <= 0 || m_sf <= 0) {
        fail(errc::invariant_violation, "azimuthal mode numbers must be positive");
    }
    if (!(lambda_s_nm > 0.0) || !(lambda_p_nm > 0.0) || !(lambda_sf_nm > 0.0)) {
        fail(errc::invariant_violation, "mode wavelengths must be positive");
    }
    // 1/lambda_sf = 1/lambda_s + 1/lambda_p, relative to 1/lambda_sf.
    const double lhs = 1.0 / lambda_sf_nm;
    const double rhs = 1.0 / lambda_s_nm + 1.0 / lambda_p_nm;
    if (std::fabs(lhs - rhs) > energy_tol_rel * lhs) {
        std::ostringstream out;
        out << "mode triple violates energy conservation: 1/" << lambda_sf_nm
            << " vs 1/" << lambda_s_nm << " + 1/" << lambda_p_nm
            << " (relative mismatch " << std::fabs(lhs - rhs) / lhs
            << ", tolerance " << energy_tol_rel << ")";
        fail(errc::invariant_violation, out.str());
    }
}

double ModeTriple::lambda_nm(Band band) const {
    switch (band) {
        case Band::signal: return lambda_s_nm;
        case Band::pump: return lambda_p_nm;
        case Band::sf: return lambda_sf_nm;
    }
    return lambda_s_nm;
}

int ModeTriple::mode_number(Band band) const {
    switch (band) {
        case Band::signal: return m_s;
        case Band::pump: return m_p;
        case Band::sf: return m_sf;
    }
    return m_s;
}

void QPair::validate() const {
    if (!(q_intrinsic > 0.0) || !(q_loaded > 0.0)) {
        fail(errc::invariant_violation, "Q factors must be positive");
    }
    if (q_loaded >= q_intrinsic) {
        fail(errc::invariant_violation, "loaded Q must be below intrinsic Q");
    }
}

const QPair& QSet::for_band(Band band) const {
    switch (band) {
        case Band::signal: return signal;
        case Band::pump: return pump;
        case Band::sf: return sf;
    }
    return signal;
}

void QSet::validate() const {
    signal.validate();
    pump.validate();
    sf.validate();
}

int qpm_order(int m_s, int m_p, int m_sf) {
    if (m_s <= 0 || m_p <= 0 || m_sf <= 0) {
        fail(errc::contract, "mode numbers must be positive");
    }
    return m_sf - m_s - m_p;
}

int qpm_order(const ModeTriple& triple) {
    return qpm_order(triple.m_s, triple.m_p, triple.m_sf);
}

double poling_period_um(double radius_um, int order) {
    if (order <= 0) {
        fail(errc::invalid_order, "poling order M must be positive");
    }
    return 2.0 * kPi * radius_um / static_cast<double>(order);
}

double alpha_roundtrip(const RingParams& ring) {
    const double loss_db = ring.alpha_db_per_cm * ring.circumference_um * 1e-4;
    return 1.0 - db_to_power_fraction(loss_db);
}

double eta_max_couplings(const RingParams& ring, const CouplerSpec& c) {
    const double a_l = alpha_roundtrip(ring);
    const double f_sf = saturation_ratio(c.kappa2_at(Band::sf, Port::B),
                                         a_l + c.kappa2_at(Band::sf, Port::A));
    const double f_s = saturation_ratio(c.kappa2_at(Band::signal, Port::A),
                                        a_l + c.kappa2_at(Band::signal, Port::B));
    return f_sf * f_s;
}

double eta_max_q(const QSet& qs) {
    qs.signal.validate();
    qs.sf.validate();
    return (1.0 - qs.signal.q_loaded / qs.signal.q_intrinsic) *
           (1.0 - qs.sf.q_loaded / qs.sf.q_intrinsic);
}

QPair q_from_losses(double n_group, const RingParams& ring, double lambda_nm,
                    double coupling_loss, double other_loss) {
    if (coupling_loss < 0.0 || other_loss < 0.0) {
        fail(errc::contract, "round-trip loss fractions must be non-negative");
    }
    const double propagation = alpha_roundtrip(ring);
    const double total = propagation + coupling_loss + other_loss;
    if (!(total > 0.0) || total >= 0.5) {
        std::ostringstream out;
        out << "total round-trip loss " << total
            << " outside small-loss regime (0, 0.5); the linear Q = 2*pi*n_g*L/"
               "(lambda*l) bridge does not apply, use an exact lifetime treatment";
        fail(errc::regime, out.str());
    }
    const double phase_per_roundtrip =
        2.0 * kPi * n_group * ring.circumference_um * 1000.0 / lambda_nm;
    QPair q;
    q.q_loaded = phase_per_roundtrip / total;
    q.q_intrinsic = phase_per_roundtrip / (propagation + other_loss);
    return q;
}

QSet qset_from_couplings(const RingParams& ring, const CouplerSpec& c,
                         const std::array<double, 3>& n_group_per_band,
                         const std::array<double, 3>& lambda_nm_per_band) {
    QSet qs;
    // Signal and pump couple externally at A; their B-side coupling counts as
    // intrinsic. The SF extraction port is B with A counted as intrinsic.
    qs.signal = q_from_losses(n_group_per_band[0], ring, lambda_nm_per_band[0],
                              c.kappa2_at(Band::signal, Port::A),
                              c.kappa2_at(Band::signal, Port::B));
    qs.pump = q_from_losses(n_group_per_band[1], ring, lambda_nm_per_band[1],
                            c.kappa2_at(Band::pump, Port::A),
                            c.kappa2_at(Band::pump, Port::B));
    qs.sf = q_from_losses(n_group_per_band[2], ring, lambda_nm_per_band[2],
                          c.kappa2_at(Band::sf, Port::B),
                          c.kappa2_at(Band::sf, Port::A));
    return qs;
}

double pulley_gap_um(const IndexModel& ring_model, const IndexModel& wg_model,
                     const RingParams& ring, double w_wg_um, double lambda_nm) {
    const double n_ring = n_eff(ring_model, lambda_nm);
    const double n_wg = n_eff(wg_model, lambda_nm);
    if (!(n_wg > 0.0)) {
        fail(errc::contract, "bus waveguide index must be positive");
    }
    const double gap = n_ring * (ring.radius_um + ring.w_ring_um / 4.0) / n_wg -
                       ring.radius_um - ring.w_ring_um / 2.0 - w_wg_um / 2.0;
    if (!(gap > 0.0)) {
        std::ostringstream out;
        out << "index-matching relation has no positive gap (n_ring/n_wg = "
            << n_ring / n_wg << " gives gap " << gap << " um)";
        fail(errc::no_solution, out.str());
    }
    return gap;
}

double pulley_width_search(const IndexModel& ring_model,
                           const std::vector<WidthIndexModel>& wg_models,
                           const RingParams& ring, double lambda_nm,
                           double target_gap_um) {
    if (wg_models.size() < 2) {
        fail(errc::contract, "width search needs at least two per-width models");
    }
    for (std::size_t i = 1; i < wg_models.size(); ++i) {
        if (!(wg_models[i].w_wg_um > wg_models[i - 1].w_wg_um)) {
            fail(errc::contract, "per-width models must be sorted by increasing width");
        }
    }

    // n_wg interpolated linearly in width between the supplied models; the
    // result is only as good as that interpolation.
    auto gap_at = [&](double w_um) {
        std::size_t hi = 1;
        while (hi + 1 < wg_models.size() && wg_models[hi].w_wg_um < w_um) {
            ++hi;
        }
        const auto& a = wg_models[hi - 1];
        const auto& b = wg_models[hi];
        const double t = (w_um - a.w_wg_um) / (b.w_wg_um - a.w_wg_um);
        const double n_wg = (1.0 - t) * n_eff(a.model, lambda_nm) +
                            t * n_eff(b.model, lambda_nm);
        return n_eff(ring_model, lambda_nm) *
                   (ring.radius_um + ring.w_ring_um / 4.0) / n_wg -
               ring.radius_um - ring.w_ring_um / 2.0 - w_um / 2.0;
    };

    double lo = wg_models.front().w_wg_um;
    double hi = wg_models.back().w_wg_um;
    double f_lo = gap_at(lo) - target_gap_um;
    double f_hi = gap_at(hi) - target_gap_um;
    if (f_lo * f_hi > 0.0) {
        fail(errc::no_solution, "target gap is not bracketed by the supplied widths");
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-9; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = gap_at(mid) - target_gap_um;
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool TripleResonanceResiduals::within(double tol) const {
    return std::fabs(signal) < tol && std::fabs(pump) < tol && std::fabs(sf) < tol;
}

TripleResonanceResiduals triple_resonance_residual(const IndexModelSet& models,
                                                   const RingParams& ring,
                                                   const ModeTriple& triple) {
    auto residual = [&](Band band) {
        const double lambda = triple.lambda_nm(band);
        const double n = n_eff(models.for_band(band), lambda);
        return 2.0 * kPi * ring.radius_um * 1000.0 * n / lambda -
               static_cast<double>(triple.mode_number(band));
    };
    TripleResonanceResiduals r;
    r.signal = residual(Band::signal);
    r.pump = residual(Band::pump);
    r.sf = residual(Band::sf);
    return r;
}

} // namespace qfc
