#include "qfc/system.hpp"

#include <cmath>
#include <sstream>

#include "qfc/common.hpp"
#include "qfc/errors.hpp"

namespace qfc {

void LossChain::validate() const {
    for (const LossStage& stage : stages) {
        if (!(stage.efficiency > 0.0) || stage.efficiency > 1.0) {
            fail(errc::invariant_violation,
                 "stage '" + stage.name + "' efficiency must be in (0, 1]");
        }
    }
}

ChainEfficiency chain_efficiency(const LossChain& chain) {
    if (chain.stages.empty()) {
        fail(errc::empty_input, "loss chain has no stages");
    }
    chain.validate();
    ChainEfficiency out;
    for (const LossStage& stage : chain.stages) {
        out.fraction *= stage.efficiency;
    }
    out.db = power_fraction_to_db(out.fraction);
    return out;
}

void PowerBudget::validate() const {
    if (!(source_mw > 0.0) || !(per_channel_uw > 0.0)) {
        fail(errc::invariant_violation, "budget powers must be positive");
    }
    if (!(eta_couple > 0.0) || eta_couple > 1.0) {
        fail(errc::invariant_violation, "coupling efficiency must be in (0, 1]");
    }
}

int channel_count(const PowerBudget& budget) {
    budget.validate();
    const double quotient =
        budget.source_mw * 1000.0 * budget.eta_couple / budget.per_channel_uw;
    return static_cast<int>(std::floor(quotient * (1.0 + 1e-12)));
}

void DfbTuning::validate() const {
    if (!(lambda0_nm > 0.0)) {
        fail(errc::invariant_violation, "anchor wavelength must be positive");
    }
    if (!(slope_pm_per_c > 0.0)) {
        fail(errc::invariant_violation, "tuning slope must be positive");
    }
    if (!(t_min_c < t_max_c)) {
        fail(errc::invariant_violation, "temperature range must be nonempty");
    }
}

double dfb_wavelength_nm(const DfbTuning& tuning, double temp_c) {
    tuning.validate();
    if (temp_c < tuning.t_min_c || temp_c > tuning.t_max_c) {
        std::ostringstream out;
        out << "temperature " << temp_c << " C outside the safe range ["
            << tuning.t_min_c << ", " << tuning.t_max_c << "] C";
        fail(errc::range, out.str());
    }
    return tuning.lambda0_nm + tuning.slope_pm_per_c * 1e-3 * (temp_c - tuning.t0_c);
}

void NoiseModel::validate() const {
    if (c1_cps_per_w < 0.0 || c2_cps_per_w2 < 0.0) {
        fail(errc::invariant_violation, "noise coefficients must be non-negative");
    }
}

double NoiseModel::at(double pump_w) const {
    validate();
    if (pump_w < 0.0) {
        fail(errc::contract, "pump power must be non-negative");
    }
    return c1_cps_per_w * pump_w + c2_cps_per_w2 * pump_w * pump_w;
}

} // namespace qfc
