#include "qfc/cmt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

namespace {

using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};

double sq(double v) { return v * v; }

} // namespace

void ModeRates::validate() const {
    if (!(omega_rad_per_s > 0.0)) {
        fail(errc::invariant_violation, "mode frequency must be positive");
    }
    if (!(kappa_ext > 0.0) || kappa_ext > kappa_tot) {
        fail(errc::invariant_violation,
             "external decay must satisfy 0 < kappa_ext <= kappa_tot");
    }
    if (!std::isfinite(detuning)) {
        fail(errc::invariant_violation, "detuning must be finite");
    }
}

const ModeRates& CmtParams::mode(Band band) const {
    switch (band) {
        case Band::signal: return signal;
        case Band::pump: return pump;
        case Band::sf: return sf;
    }
    return signal;
}

ModeRates& CmtParams::mode(Band band) {
    switch (band) {
        case Band::signal: return signal;
        case Band::pump: return pump;
        case Band::sf: return sf;
    }
    return signal;
}

bool CmtParams::on_resonance() const {
    return signal.detuning == 0.0 && pump.detuning == 0.0 && sf.detuning == 0.0;
}

void CmtParams::validate(double energy_tol_rel) const {
    signal.validate();
    pump.validate();
    sf.validate();
    if (g_rad_per_s < 0.0) {
        fail(errc::invariant_violation, "coupling rate g must be non-negative");
    }
    const double sum = signal.omega_rad_per_s + pump.omega_rad_per_s;
    if (std::fabs(sf.omega_rad_per_s - sum) > energy_tol_rel * sum) {
        std::ostringstream out;
        out << "omega_sf deviates from omega_s + omega_p by "
            << std::fabs(sf.omega_rad_per_s - sum) / sum << " relative (tolerance "
            << energy_tol_rel << ")";
        fail(errc::invariant_violation, out.str());
    }
}

void ConversionCurve::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].pump_w > points[i - 1].pump_w)) {
            fail(errc::invariant_violation, "pump powers must be strictly increasing");
        }
        const double eta = points[i].eta;
        if (eta < 0.0 || eta > eta_max * (1.0 + 1e-12)) {
            fail(errc::invariant_violation, "efficiency outside [0, eta_max]");
        }
    }
}

CmtParams params_from_q(const QSet& qs, double lambda_s_nm, double lambda_p_nm,
                        double g_rad_per_s) {
    qs.validate();
    CmtParams p;
    p.g_rad_per_s = g_rad_per_s;
    p.signal.omega_rad_per_s = omega_from_wavelength_nm(lambda_s_nm);
    p.pump.omega_rad_per_s = omega_from_wavelength_nm(lambda_p_nm);
    p.sf.omega_rad_per_s = p.signal.omega_rad_per_s + p.pump.omega_rad_per_s;
    for (Band band : {Band::signal, Band::pump, Band::sf}) {
        const QPair& q = qs.for_band(band);
        ModeRates& m = p.mode(band);
        m.kappa_tot = m.omega_rad_per_s / q.q_loaded;
        m.kappa_ext = m.omega_rad_per_s * (1.0 / q.q_loaded - 1.0 / q.q_intrinsic);
    }
    p.validate();
    return p;
}

double eta_max(const CmtParams& params) {
    params.validate();
    return (params.signal.kappa_ext / params.signal.kappa_tot) *
           (params.sf.kappa_ext / params.sf.kappa_tot);
}

double p_opt_w(const CmtParams& params) {
    params.validate();
    if (params.g_rad_per_s == 0.0) {
        fail(errc::no_conversion, "g = 0 gives no conversion and no optimum");
    }
    const double hw_p = kHbarJs * params.pump.omega_rad_per_s;
    return hw_p * sq(params.pump.kappa_tot) * params.signal.kappa_tot *
           params.sf.kappa_tot /
           (16.0 * sq(params.g_rad_per_s) * params.pump.kappa_ext);
}

double eta_of_pump(const CmtParams& params, double pump_w, bool allow_detuned) {
    params.validate();
    if (pump_w < 0.0) {
        fail(errc::contract, "pump power must be non-negative");
    }
    if (params.on_resonance()) {
        if (pump_w == 0.0 || params.g_rad_per_s == 0.0) {
            return 0.0;
        }
        const double x = pump_w / p_opt_w(params);
        return eta_max(params) * 4.0 * x / sq(1.0 + x);
    }
    if (!allow_detuned) {
        fail(errc::contract,
             "detuned parameters passed to the on-resonance efficiency curve");
    }
    const cplx d_s{params.signal.kappa_tot / 2.0, params.signal.detuning};
    const cplx d_p{params.pump.kappa_tot / 2.0, params.pump.detuning};
    const cplx d_sf{params.sf.kappa_tot / 2.0, params.sf.detuning};
    const double n_p = params.pump.kappa_ext * pump_w /
                       (kHbarJs * params.pump.omega_rad_per_s * std::norm(d_p));
    const double g2np = sq(params.g_rad_per_s) * n_p;
    return params.sf.kappa_ext * params.signal.kappa_ext * g2np /
           (std::norm(d_sf) * std::norm(d_s + g2np / d_sf));
}

CmtParams calibrate_g(double eta_max_measured, double p_opt_target_w,
                      const CmtParams& partial) {
    if (!(eta_max_measured > 0.0) || !(eta_max_measured < 1.0)) {
        fail(errc::contract, "measured eta_max must be in (0, 1)");
    }
    if (!(p_opt_target_w > 0.0)) {
        fail(errc::contract, "optimal pump power must be positive");
    }
    CmtParams out = partial;
    out.g_rad_per_s = partial.pump.kappa_tot *
                      std::sqrt(kHbarJs * partial.pump.omega_rad_per_s *
                                partial.signal.kappa_tot * partial.sf.kappa_tot /
                                (16.0 * partial.pump.kappa_ext * p_opt_target_w));
    out.validate();
    return out;
}

ConversionCurve conversion_curve(const CmtParams& params,
                                 const std::vector<double>& pump_powers_w) {
    ConversionCurve curve;
    curve.eta_max = eta_max(params);
    curve.p_opt_w = p_opt_w(params);
    curve.points.reserve(pump_powers_w.size());
    for (double p : pump_powers_w) {
        curve.points.push_back({p, eta_of_pump(params, p)});
    }
    curve.validate();
    return curve;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        fail(errc::contract, "log spacing needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    }
    out.back() = hi;
    return out;
}

double normalized_efficiency(const ConversionCurve& curve) {
    if (!(curve.p_opt_w > 0.0)) {
        fail(errc::contract, "curve lacks a positive P_opt");
    }
    double sum_pp = 0.0;
    double sum_pe = 0.0;
    int used = 0;
    for (const CurvePoint& pt : curve.points) {
        if (pt.pump_w > 0.0 && pt.pump_w < 0.1 * curve.p_opt_w) {
            sum_pp += pt.pump_w * pt.pump_w;
            sum_pe += pt.pump_w * pt.eta;
            ++used;
        }
    }
    if (used < 3) {
        std::ostringstream out;
        out << "normalized efficiency needs >= 3 points below 0.1*P_opt, got "
            << used;
        fail(errc::sampling, out.str());
    }
    return 100.0 * sum_pe / sum_pp;
}

double normalized_efficiency_ideal(double eta_max, double p_opt_w) {
    if (!(p_opt_w > 0.0)) {
        fail(errc::contract, "optimal pump power must be positive");
    }
    return 100.0 * 4.0 * eta_max / p_opt_w;
}

OdeResult steady_state_ode(const CmtParams& params, const CmtDrive& drive,
                           const OdeOptions& options) {
    params.validate();
    if (drive.pump_w < 0.0 || drive.signal_w < 0.0) {
        fail(errc::contract, "drive powers must be non-negative");
    }

    const double s_in =
        std::sqrt(drive.signal_w / (kHbarJs * params.signal.omega_rad_per_s));
    const double p_in =
        std::sqrt(drive.pump_w / (kHbarJs * params.pump.omega_rad_per_s));
    const cplx drive_s = std::sqrt(params.signal.kappa_ext) * s_in;
    const cplx drive_p = std::sqrt(params.pump.kappa_ext) * p_in;
    const cplx d_s{params.signal.kappa_tot / 2.0, params.signal.detuning};
    const cplx d_p{params.pump.kappa_tot / 2.0, params.pump.detuning};
    const cplx d_sf{params.sf.kappa_tot / 2.0, params.sf.detuning};
    const double g = params.g_rad_per_s;
    const bool deplete = options.pump_depletion;

    using State = std::array<cplx, 3>;
    auto deriv = [&](const State& a) {
        return State{
            -d_s * a[0] - kI * g * std::conj(a[1]) * a[2] + drive_s,
            -d_p * a[1] - (deplete ? kI * g * std::conj(a[0]) * a[2] : cplx{}) +
                drive_p,
            -d_sf * a[2] - kI * g * a[0] * a[1],
        };
    };

    const double kappa_max = std::max(
        {params.signal.kappa_tot, params.pump.kappa_tot, params.sf.kappa_tot});
    const double h = 0.01 / kappa_max;
    // Threshold on per-step change such that the change rate per unit
    // kappa_max*t stays below rel_tol.
    const double step_tol = options.rel_tol * kappa_max * h;

    State a{};
    OdeResult result;
    double rel = 0.0;
    for (std::int64_t step = 0; step < options.max_steps; ++step) {
        const State k1 = deriv(a);
        State tmp;
        for (int j = 0; j < 3; ++j) tmp[j] = a[j] + 0.5 * h * k1[j];
        const State k2 = deriv(tmp);
        for (int j = 0; j < 3; ++j) tmp[j] = a[j] + 0.5 * h * k2[j];
        const State k3 = deriv(tmp);
        for (int j = 0; j < 3; ++j) tmp[j] = a[j] + h * k3[j];
        const State k4 = deriv(tmp);

        double change = 0.0;
        double scale = 0.0;
        for (int j = 0; j < 3; ++j) {
            const cplx delta = h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            a[j] += delta;
            change = std::max(change, std::abs(delta));
            scale = std::max(scale, std::abs(a[j]));
        }
        result.steps = step + 1;
        result.time_s += h;
        rel = change / std::max(scale, 1e-300);
        if (rel < step_tol) {
            result.state = {a[0], a[1], a[2]};
            result.eta = (drive.signal_w > 0.0)
                             ? params.sf.kappa_ext * std::norm(a[2]) / sq(s_in)
                             : 0.0;
            return result;
        }
    }
    std::ostringstream out;
    out << "steady state not reached after " << options.max_steps
        << " steps; residual change rate " << rel / (kappa_max * h)
        << " per unit kappa_max*t (tolerance " << options.rel_tol << ")";
    fail(errc::convergence, out.str());
}

double FluxBudget::residual_rel() const {
    if (input == 0.0) {
        return 0.0;
    }
    return std::fabs(input - transmitted - dissipated - converted) / input;
}

FluxBudget photon_flux_budget(const CmtParams& params, const CmtDrive& drive,
                              const CmtState& state) {
    const double s_in =
        std::sqrt(drive.signal_w / (kHbarJs * params.signal.omega_rad_per_s));
    FluxBudget b;
    b.input = sq(s_in);
    b.transmitted =
        std::norm(s_in - std::sqrt(params.signal.kappa_ext) * state.a_s);
    b.dissipated =
        (params.signal.kappa_tot - params.signal.kappa_ext) * std::norm(state.a_s);
    b.converted = params.sf.kappa_tot * std::norm(state.a_sf);
    return b;
}

double qe_from_powers(double p_s_w, double p_sf_w, double lambda_s_nm,
                      double lambda_sf_nm) {
    if (p_s_w == 0.0) {
        fail(errc::division, "signal power is zero, conversion ratio undefined");
    }
    if (p_s_w < 0.0 || p_sf_w < 0.0 || !(lambda_s_nm > 0.0) ||
        !(lambda_sf_nm > 0.0)) {
        fail(errc::contract, "powers must be non-negative and wavelengths positive");
    }
    return p_sf_w * lambda_sf_nm / (p_s_w * lambda_s_nm);
}

} // namespace qfc
