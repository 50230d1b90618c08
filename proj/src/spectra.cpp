#include "qfc/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qfc/detail/linalg.hpp"
#include "qfc/errors.hpp"

namespace qfc {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                     v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(),
                         v.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                         v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

// Robust noise floor from first differences; exact for white Gaussian noise,
// small but nonzero for a noiseless resonance (wing slopes).
double noise_sigma_estimate(const std::vector<double>& t) {
    std::vector<double> diffs;
    diffs.reserve(t.size());
    for (std::size_t i = 1; i < t.size(); ++i) {
        diffs.push_back(std::fabs(t[i] - t[i - 1]));
    }
    return 1.4826 * median_of(std::move(diffs)) / std::sqrt(2.0);
}

std::vector<double> moving_average(const std::vector<double>& t, std::size_t half) {
    std::vector<double> out(t.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(t.size());
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(half);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - h);
        const std::ptrdiff_t hi = std::min(n - 1, i + h);
        double sum = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            sum += t[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

struct DipWindow {
    std::size_t i_min = 0;
    std::size_t i_lo = 0;
    std::size_t i_hi = 0;
    double depth = 0.0;
};

DipWindow locate_single_dip(const std::vector<double>& lambda,
                            const std::vector<double>& smoothed, double sigma) {
    DipWindow dip;
    double t_min = smoothed.front();
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        if (smoothed[i] < t_min) {
            t_min = smoothed[i];
            dip.i_min = i;
        }
    }
    dip.depth = 1.0 - t_min;
    if (!(dip.depth > 3.0 * sigma) || dip.depth <= 0.0) {
        std::ostringstream out;
        out << "no dip exceeding 3x the noise floor (depth " << dip.depth
            << ", noise " << sigma << ")";
        fail(errc::detection, out.str());
    }

    // Count half-depth clusters. Below-threshold runs separated by at most
    // two samples merge, and single-sample clusters are noise, not dips.
    const double tau = 1.0 - 0.5 * dip.depth;
    std::vector<std::size_t> below;
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        if (smoothed[i] < tau) {
            below.push_back(i);
        }
    }
    int clusters = 0;
    std::size_t cluster_size = 0;
    for (std::size_t k = 0; k < below.size(); ++k) {
        if (k == 0 || below[k] - below[k - 1] > 3) {
            if (cluster_size >= 2) {
                ++clusters;
            }
            cluster_size = 0;
        }
        ++cluster_size;
    }
    if (cluster_size >= 2) {
        ++clusters;
    }
    if (clusters > 1) {
        std::ostringstream out;
        out << clusters << " distinct dips found, expected exactly one";
        fail(errc::multiplicity, out.str());
    }

    dip.i_lo = dip.i_min;
    while (dip.i_lo > 0 && smoothed[dip.i_lo - 1] < tau) {
        --dip.i_lo;
    }
    dip.i_hi = dip.i_min;
    while (dip.i_hi + 1 < smoothed.size() && smoothed[dip.i_hi + 1] < tau) {
        ++dip.i_hi;
    }
    (void)lambda;
    return dip;
}

struct LorentzianFit {
    double lambda0 = 0.0;
    double hwhm = 0.0;
    double depth = 0.0;
    double cost = 0.0;
};

// Damped Gauss-Newton (Levenberg-Marquardt, multiplicative diagonal damping)
// on T = 1 - d w^2/((lambda - lambda0)^2 + w^2).
LorentzianFit fit_lorentzian(const std::vector<double>& lambda,
                             const std::vector<double>& t, double l0, double w0,
                             double d0, double lo, double hi) {
    const std::size_t n = lambda.size();
    auto cost_of = [&](double l, double w, double d) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = lambda[i] - l;
            const double r = t[i] - (1.0 - d * w * w / (u * u + w * w));
            c += r * r;
        }
        return c;
    };

    LorentzianFit fit{l0, w0, d0, cost_of(l0, w0, d0)};
    double mu = 1e-3;
    for (int iter = 0; iter < 200; ++iter) {
        std::array<double, 9> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < n; ++i) {
            const double u = lambda[i] - fit.lambda0;
            const double den = u * u + fit.hwhm * fit.hwhm;
            const double w2 = fit.hwhm * fit.hwhm;
            const double r = t[i] - (1.0 - fit.depth * w2 / den);
            const std::array<double, 3> j{
                -2.0 * fit.depth * w2 * u / (den * den),
                -2.0 * fit.depth * fit.hwhm * u * u / (den * den),
                -w2 / den,
            };
            for (int a = 0; a < 3; ++a) {
                jtr[static_cast<std::size_t>(a)] += j[static_cast<std::size_t>(a)] * r;
                for (int b = 0; b < 3; ++b) {
                    jtj[static_cast<std::size_t>(3 * a + b)] +=
                        j[static_cast<std::size_t>(a)] * j[static_cast<std::size_t>(b)];
                }
            }
        }
        const double grad_inf =
            std::max({std::fabs(jtr[0]), std::fabs(jtr[1]), std::fabs(jtr[2])});
        if (grad_inf < 1e-12) {
            break;
        }

        std::vector<double> a(9);
        for (int k = 0; k < 9; ++k) {
            a[static_cast<std::size_t>(k)] = jtj[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < 3; ++k) {
            a[static_cast<std::size_t>(4 * k)] *= 1.0 + mu;
        }
        std::vector<double> step(jtr.begin(), jtr.end());
        if (!detail::solve_dense(a, step, 3)) {
            mu *= 10.0;
            continue;
        }
        const double l_new = fit.lambda0 + step[0];
        const double w_new = fit.hwhm + step[1];
        const double d_new = fit.depth + step[2];
        if (!(w_new > 0.0) || !(d_new > 0.0) || d_new > 1.5 || l_new < lo ||
            l_new > hi) {
            mu *= 10.0;
            continue;
        }
        const double c_new = cost_of(l_new, w_new, d_new);
        if (c_new < fit.cost) {
            fit = {l_new, w_new, d_new, c_new};
            mu = std::max(mu * 0.1, 1e-15);
        } else {
            mu *= 10.0;
        }
    }
    return fit;
}

} // namespace

void SpectrumTrace::validate() const {
    if (wavelength_nm.size() != transmission.size()) {
        fail(errc::invariant_violation, "trace channel lengths differ");
    }
    if (wavelength_nm.size() < 2) {
        fail(errc::invariant_violation, "trace needs at least two samples");
    }
    for (std::size_t i = 0; i < wavelength_nm.size(); ++i) {
        if (i > 0 && !(wavelength_nm[i] > wavelength_nm[i - 1])) {
            fail(errc::invariant_violation, "wavelengths must be strictly increasing");
        }
        const double t = transmission[i];
        // Noise excursions slightly outside [0, 1] are tolerated.
        if (!std::isfinite(t) || t < -0.2 || t > 1.2) {
            fail(errc::invariant_violation, "transmission sample outside [0,1] band");
        }
    }
}

std::string to_string(CouplingRegime regime) {
    switch (regime) {
        case CouplingRegime::over: return "over";
        case CouplingRegime::under: return "under";
        case CouplingRegime::critical: return "critical";
    }
    return "under";
}

CouplingRegime regime_from_string(const std::string& text) {
    if (text == "over") return CouplingRegime::over;
    if (text == "under") return CouplingRegime::under;
    if (text == "critical") return CouplingRegime::critical;
    fail(errc::config, "unknown coupling regime '" + text + "'");
}

void SynthSpec::validate() const {
    if (!(lambda0_nm > 0.0)) {
        fail(errc::invariant_violation, "resonance wavelength must be positive");
    }
    if (!(kappa_ext_in > 0.0) || kappa0 < 0.0) {
        fail(errc::invariant_violation,
             "need kappa_ext_in > 0 and kappa0 >= 0 for a through-port trace");
    }
    if (!(n_group > 0.0)) {
        fail(errc::invariant_violation, "group index must be positive");
    }
    if (noise_sigma < 0.0) {
        fail(errc::invariant_violation, "noise sigma must be non-negative");
    }
}

double SynthSpec::fwhm_nm() const {
    return kappa_tot() * lambda0_nm * lambda0_nm /
           (2.0 * kPi * kSpeedOfLightNmPerS);
}

double fsr_nm(const RingParams& ring, double n_group, double lambda_nm) {
    if (!(n_group > 0.0) || !(lambda_nm > 0.0)) {
        fail(errc::contract, "group index and wavelength must be positive");
    }
    ring.validate();
    return lambda_nm * lambda_nm / (n_group * ring.circumference_um * 1000.0);
}

std::vector<double> resonance_grid(double lambda0_nm, double fwhm_nm,
                                   double span_linewidths,
                                   double samples_per_linewidth) {
    if (!(lambda0_nm > 0.0) || !(fwhm_nm > 0.0) || !(span_linewidths > 0.0) ||
        !(samples_per_linewidth > 0.0)) {
        fail(errc::contract, "grid parameters must be positive");
    }
    const auto n_half = static_cast<std::size_t>(
        std::ceil(span_linewidths * samples_per_linewidth / 2.0));
    const double step = span_linewidths * fwhm_nm / 2.0 / static_cast<double>(n_half);
    std::vector<double> grid;
    grid.reserve(2 * n_half + 1);
    for (std::size_t i = 0; i <= 2 * n_half; ++i) {
        grid.push_back(lambda0_nm +
                       (static_cast<double>(i) - static_cast<double>(n_half)) * step);
    }
    return grid;
}

SpectrumTrace synth_transmission(const RingParams& ring, const SynthSpec& spec,
                                 const std::vector<double>& grid_nm) {
    ring.validate();
    spec.validate();
    if (grid_nm.size() < 2) {
        fail(errc::contract, "grid needs at least two samples");
    }
    const double fwhm = spec.fwhm_nm();
    double max_spacing = 0.0;
    for (std::size_t i = 1; i < grid_nm.size(); ++i) {
        if (!(grid_nm[i] > grid_nm[i - 1])) {
            fail(errc::contract, "grid must be strictly increasing");
        }
        max_spacing = std::max(max_spacing, grid_nm[i] - grid_nm[i - 1]);
    }
    if (max_spacing > fwhm / 20.0) {
        std::ostringstream out;
        out << "grid spacing " << max_spacing << " nm exceeds FWHM/20 = "
            << fwhm / 20.0 << " nm";
        fail(errc::sampling, out.str());
    }
    if (grid_nm.back() - grid_nm.front() < 5.0 * fwhm) {
        std::ostringstream out;
        out << "grid span " << grid_nm.back() - grid_nm.front()
            << " nm covers fewer than 5 linewidths (" << 5.0 * fwhm << " nm)";
        fail(errc::sampling, out.str());
    }

    const double fsr = fsr_nm(ring, spec.n_group, spec.lambda0_nm);
    const auto k_lo = static_cast<long>(
        std::floor((grid_nm.front() - spec.lambda0_nm) / fsr)) - 1;
    const auto k_hi = static_cast<long>(
        std::ceil((grid_nm.back() - spec.lambda0_nm) / fsr)) + 1;
    std::vector<double> lines;
    for (long k = k_lo; k <= k_hi; ++k) {
        lines.push_back(spec.lambda0_nm + static_cast<double>(k) * fsr);
    }

    const double kt = spec.kappa_tot();
    const double ke = spec.kappa_ext_in;
    const double numer = ke * (kt - ke);
    const double half2 = kt * kt / 4.0;

    SpectrumTrace trace;
    trace.band = spec.band;
    trace.wavelength_nm = grid_nm;
    trace.transmission.reserve(grid_nm.size());
    for (double lambda : grid_nm) {
        double t = 1.0;
        for (double line : lines) {
            const double delta = 2.0 * kPi * kSpeedOfLightNmPerS *
                                 (1.0 / lambda - 1.0 / line);
            t *= 1.0 - numer / (delta * delta + half2);
        }
        trace.transmission.push_back(t);
    }

    if (spec.noise_sigma > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (double& t : trace.transmission) {
            t += noise(rng);
        }
    }
    return trace;
}

ResonanceFit fit_resonance(const SpectrumTrace& trace, CouplingRegime hint) {
    trace.validate();
    const std::vector<double>& lambda = trace.wavelength_nm;
    const std::vector<double>& t = trace.transmission;
    if (lambda.size() < 10) {
        fail(errc::sampling, "trace too short to fit");
    }

    const double sigma = noise_sigma_estimate(t);
    const std::size_t half = std::max<std::size_t>(1, lambda.size() / 100);
    const std::vector<double> smoothed = moving_average(t, half);
    const DipWindow dip = locate_single_dip(lambda, smoothed, sigma);

    const double l0 = lambda[dip.i_min];
    double width = lambda[dip.i_hi] - lambda[dip.i_lo];
    if (!(width > 0.0)) {
        width = lambda[1] - lambda[0];
    }
    const LorentzianFit lm = fit_lorentzian(lambda, t, l0, width / 2.0, dip.depth,
                                            lambda.front(), lambda.back());

    ResonanceFit fit;
    fit.lambda0_nm = lm.lambda0;
    fit.fwhm_nm = 2.0 * lm.hwhm;
    fit.t0 = std::max(0.0, 1.0 - lm.depth);
    fit.q_loaded = fit.lambda0_nm / fit.fwhm_nm;
    fit.residual_rms = std::sqrt(lm.cost / static_cast<double>(lambda.size()));

    const double sqrt_t0 = std::sqrt(fit.t0);
    if (sqrt_t0 < 1e-6) {
        fit.regime = CouplingRegime::critical;
        fit.q_intrinsic = 2.0 * fit.q_loaded;
        return fit;
    }
    if (hint == CouplingRegime::critical) {
        fail(errc::contract,
             "critical hint given but the dip is not at full extinction");
    }
    fit.regime = hint;
    const double ext_ratio = hint == CouplingRegime::over ? (1.0 + sqrt_t0) / 2.0
                                                          : (1.0 - sqrt_t0) / 2.0;
    fit.q_intrinsic = fit.q_loaded / (1.0 - ext_ratio);
    return fit;
}

void DcModel::validate() const {
    if (!(length_um > 0.0)) {
        fail(errc::invariant_violation, "coupler length must be positive");
    }
    if (cross_ref < 0.0 || cross_ref > 1.0) {
        fail(errc::invariant_violation, "reference cross coupling must be in [0,1]");
    }
    if (excess_loss_db < 0.0) {
        fail(errc::invariant_violation, "excess loss must be non-negative");
    }
    if (!(band_lo_nm < band_hi_nm)) {
        fail(errc::invariant_violation, "coupler band must be a nonempty interval");
    }
    if (lambda_ref_nm < band_lo_nm || lambda_ref_nm > band_hi_nm) {
        fail(errc::invariant_violation, "reference wavelength outside the band");
    }
}

DcTransfer dc_transfer(const DcModel& dc, double lambda_nm) {
    dc.validate();
    if (lambda_nm < dc.band_lo_nm || lambda_nm > dc.band_hi_nm) {
        std::ostringstream out;
        out << "wavelength " << lambda_nm << " nm outside the coupler band ["
            << dc.band_lo_nm << ", " << dc.band_hi_nm << "] nm";
        fail(errc::range, out.str());
    }
    const double theta = std::asin(std::sqrt(dc.cross_ref)) +
                         dc.theta_slope_per_nm * (lambda_nm - dc.lambda_ref_nm);
    DcTransfer transfer;
    transfer.cross = std::sin(theta) * std::sin(theta);
    transfer.bar = (1.0 - transfer.cross) * db_to_power_fraction(dc.excess_loss_db);
    return transfer;
}

} // namespace qfc
