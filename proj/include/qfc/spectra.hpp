#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfc/common.hpp"
#include "qfc/ring.hpp"

namespace qfc {

// Normalized through-port transmission samples. Fits assume the trace
// approaches 1 away from resonance.
struct SpectrumTrace {
    std::vector<double> wavelength_nm;
    std::vector<double> transmission;
    Band band = Band::signal;

    void validate() const;
};

enum class CouplingRegime { over, under, critical };

std::string to_string(CouplingRegime regime);
CouplingRegime regime_from_string(const std::string& text);

struct ResonanceFit {
    double lambda0_nm = 0.0;
    double fwhm_nm = 0.0;
    double t0 = 0.0;
    double q_loaded = 0.0;
    double q_intrinsic = 0.0;
    CouplingRegime regime = CouplingRegime::under;
    double residual_rms = 0.0;
};

// One resonance comb for a single band. kappa_ext_in is the external rate at
// the interrogated port, kappa0 every other loss; both energy rates in rad/s.
// n_group positions the comb lines around lambda0.
struct SynthSpec {
    Band band = Band::signal;
    double lambda0_nm = 0.0;
    double kappa_ext_in = 0.0;
    double kappa0 = 0.0;
    double n_group = 2.2;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
    double kappa_tot() const { return kappa_ext_in + kappa0; }
    double fwhm_nm() const;
};

double fsr_nm(const RingParams& ring, double n_group, double lambda_nm);

// Uniform grid centered on lambda0 covering span_linewidths * fwhm; the
// center sample lands exactly on lambda0.
std::vector<double> resonance_grid(double lambda0_nm, double fwhm_nm,
                                   double span_linewidths = 8.0,
                                   double samples_per_linewidth = 25.0);

// T(delta) = 1 - ke(kt - ke)/(delta^2 + kt^2/4) per comb line, multiplied
// over all lines near the grid. The grid must resolve the line (spacing
// <= FWHM/20) and cover at least 5 linewidths.
SpectrumTrace synth_transmission(const RingParams& ring, const SynthSpec& spec,
                                 const std::vector<double>& grid_nm);

// Levenberg-Marquardt fit of 1 - d w^2/((lambda-lambda0)^2 + w^2) to the
// single dip in the trace. A dip must rise 3x above the estimated noise
// floor; several distinct dips are refused. T0 alone cannot distinguish
// over- from under-coupling, hence the mandatory hint:
//   kappa_ext/kappa_tot = (1 +/- sqrt(T0))/2, Q0 = Q_l/(1 - kappa_ext/kappa_tot).
ResonanceFit fit_resonance(const SpectrumTrace& trace, CouplingRegime hint);

// Directional coupler with sin^2 response, anchored at one reference point.
struct DcModel {
    double length_um = 0.0;
    double lambda_ref_nm = 0.0;
    double cross_ref = 0.0;
    double theta_slope_per_nm = 0.0;
    double excess_loss_db = 0.0;
    double band_lo_nm = 0.0;
    double band_hi_nm = 0.0;

    void validate() const;
};

struct DcTransfer {
    double bar = 0.0;
    double cross = 0.0;
};

// cross = sin^2(asin(sqrt(cross_ref)) + slope*(lambda - lambda_ref)),
// bar = (1 - cross) * 10^(-excess/10); bar + cross <= 1, equal iff lossless.
DcTransfer dc_transfer(const DcModel& dc, double lambda_nm);

} // namespace qfc
