#pragma once

#include <string>
#include <vector>

namespace qfc {

struct LossStage {
    std::string name;
    double efficiency = 1.0;
};

struct LossChain {
    std::vector<LossStage> stages;

    // Every stage efficiency in (0, 1].
    void validate() const;
};

struct ChainEfficiency {
    double fraction = 1.0;
    double db = 0.0;
};

// Product of stage efficiencies, order-invariant; db is the (positive) loss.
ChainEfficiency chain_efficiency(const LossChain& chain);

struct PowerBudget {
    double source_mw = 0.0;
    double eta_couple = 0.0;
    double per_channel_uw = 0.0;

    void validate() const;
};

// floor(source * eta_couple / per_channel), with a 1e-12 relative guard so
// exact quotients are not pushed below the integer by rounding.
int channel_count(const PowerBudget& budget);

struct DfbTuning {
    double lambda0_nm = 0.0;
    double t0_c = 0.0;
    double slope_pm_per_c = 85.5;
    double t_min_c = 15.0;
    double t_max_c = 60.0;

    void validate() const;
};

double dfb_wavelength_nm(const DfbTuning& tuning, double temp_c);

// Noise counts versus pump power, N(P) = c1 P + c2 P^2. Defaults anchor the
// linear term to 7000 cps at 360 uW; the coefficients are interpolation
// placeholders, not measured ground truth.
struct NoiseModel {
    double c1_cps_per_w = 7000.0 / 360.0e-6;
    double c2_cps_per_w2 = 0.0;

    void validate() const;
    double at(double pump_w) const;
};

} // namespace qfc
