#include "qfc/run.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qfc/cmt.hpp"
#include "qfc/errors.hpp"
#include "qfc/io.hpp"
#include "qfc/log.hpp"

namespace qfc {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    return ojson(round_sig9(v));
}

[[noreturn]] void missing(Task task, const std::string& section) {
    fail(errc::config,
         "task '" + to_string(task) + "' requires config section " + section);
}

struct TaskContext {
    const Config& cfg;
    const std::filesystem::path& out_dir;
    RunResult& result;
    std::ostringstream summary;

    void emit(const std::string& name, const std::string& content) {
        write_file(out_dir / name, content);
        result.outputs.push_back(name);
    }

    void emit_json(const std::string& name, const ojson& doc) {
        emit(name, doc.dump(2) + "\n");
    }
};

const RingParams& need_ring(const TaskContext& ctx, Task task) {
    if (!ctx.cfg.ring) {
        missing(task, "$.ring");
    }
    return *ctx.cfg.ring;
}

const CouplerSpec& need_couplers(const TaskContext& ctx, Task task) {
    if (!ctx.cfg.couplers) {
        missing(task, "$.ring.couplers");
    }
    return *ctx.cfg.couplers;
}

void run_design(TaskContext& ctx) {
    const RingParams& ring = need_ring(ctx, Task::design);
    const CouplerSpec& couplers = need_couplers(ctx, Task::design);

    ojson report;
    report["alpha_roundtrip"] = num(alpha_roundtrip(ring));
    const double eta_c = eta_max_couplings(ring, couplers);
    report["eta_max_couplings"] = num(eta_c);

    double eta_q = 0.0;
    if (ctx.cfg.q_factors) {
        eta_q = eta_max_q(*ctx.cfg.q_factors);
        report["eta_max_q"] = num(eta_q);
    }

    if (ctx.cfg.triple) {
        const ModeTriple& triple = *ctx.cfg.triple;
        const int order = qpm_order(triple);
        ojson qpm;
        qpm["order"] = order;
        qpm["poling_period_um"] = num(poling_period_um(ring.radius_um, order));
        report["qpm"] = qpm;

        const TripleResonanceResiduals residuals =
            triple_resonance_residual(ctx.cfg.models, ring, triple);
        ojson res;
        res["signal"] = num(residuals.signal);
        res["pump"] = num(residuals.pump);
        res["sf"] = num(residuals.sf);
        res["within_tol"] = residuals.within();
        report["triple_residuals"] = res;

        const std::array<double, 3> lambdas{triple.lambda_s_nm, triple.lambda_p_nm,
                                            triple.lambda_sf_nm};
        const QSet qs =
            qset_from_couplings(ring, couplers, ctx.cfg.group_index, lambdas);
        ojson bridge;
        for (Band band : {Band::signal, Band::pump, Band::sf}) {
            ojson pair;
            pair["q0"] = num(qs.for_band(band).q_intrinsic);
            pair["ql"] = num(qs.for_band(band).q_loaded);
            bridge[to_string(band)] = pair;
        }
        bridge["eta_max_q"] = num(eta_max_q(qs));
        report["q_from_couplings"] = bridge;
    }

    ctx.emit_json("design_report.json", report);
    ctx.summary << "design: eta_max_couplings=" << format_sig9(eta_c);
    if (ctx.cfg.q_factors) {
        ctx.summary << " eta_max_q=" << format_sig9(eta_q);
    }
    if (ctx.cfg.triple) {
        ctx.summary << " qpm_order=" << qpm_order(*ctx.cfg.triple);
    }
    ctx.summary << " -> design_report.json\n";
}

void run_simulate(TaskContext& ctx) {
    if (!ctx.cfg.q_factors) {
        missing(Task::simulate, "$.q_factors");
    }
    if (!ctx.cfg.triple) {
        missing(Task::simulate, "$.triple");
    }
    if (!ctx.cfg.calibration) {
        missing(Task::simulate, "$.cmt.calibration");
    }
    if (!ctx.cfg.pump_sweep) {
        missing(Task::simulate, "$.cmt.pump_sweep");
    }

    const CmtParams base = params_from_q(*ctx.cfg.q_factors,
                                         ctx.cfg.triple->lambda_s_nm,
                                         ctx.cfg.triple->lambda_p_nm);
    const CalibrationInput& cal = *ctx.cfg.calibration;
    const CmtParams params = calibrate_g(cal.eta_max, cal.p_opt_w, base);
    const double p_opt = p_opt_w(params);
    const double ceiling = eta_max(params);

    const ConversionCurve curve = conversion_curve(
        params, log_spaced(ctx.cfg.pump_sweep->from_w, ctx.cfg.pump_sweep->to_w,
                           ctx.cfg.pump_sweep->points));
    ctx.emit("conversion_curve.csv", curve_csv(curve));

    const OdeResult ode =
        steady_state_ode(params, {p_opt, ctx.cfg.signal_power_w});
    const double closed = eta_of_pump(params, p_opt);

    ojson report;
    report["g_rad_per_s"] = num(params.g_rad_per_s);
    report["p_opt_W"] = num(p_opt);
    report["eta_max"] = num(ceiling);
    report["eta_max_measured"] = num(cal.eta_max);
    report["ode_eta_at_p_opt"] = num(ode.eta);
    report["closed_form_eta_at_p_opt"] = num(closed);
    report["ode_minus_closed_form"] = num(ode.eta - closed);
    report["slope_definition"] =
        "least-squares slope through the origin over P < 0.1*P_opt";
    try {
        report["normalized_efficiency_pct_per_w"] =
            num(normalized_efficiency(curve));
    } catch (const Error& e) {
        if (e.code() != errc::sampling) {
            throw;
        }
        log_warn(std::string("normalized efficiency skipped: ") + e.what());
    }
    report["normalized_efficiency_ideal_pct_per_w"] =
        num(normalized_efficiency_ideal(ceiling, p_opt));
    ctx.emit_json("calibration.json", report);

    ctx.summary << "simulate: g=" << format_sig9(params.g_rad_per_s)
                << " rad/s p_opt=" << format_sig9(p_opt)
                << " W eta_max=" << format_sig9(ceiling)
                << " -> calibration.json conversion_curve.csv\n";
}

void run_sweep(TaskContext& ctx) {
    const RingParams& ring = need_ring(ctx, Task::sweep);
    const CouplerSpec& couplers = need_couplers(ctx, Task::sweep);
    if (!ctx.cfg.sweep) {
        missing(Task::sweep, "$.sweep");
    }
    const ParamSweep& sweep = *ctx.cfg.sweep;

    std::string csv = sweep.parameter + ",eta_max\n";
    for (int i = 0; i < sweep.points; ++i) {
        const double value =
            sweep.from + (sweep.to - sweep.from) * i / (sweep.points - 1);
        RingParams r = ring;
        CouplerSpec c = couplers;
        if (sweep.parameter == "alpha_db_per_cm") {
            r.alpha_db_per_cm = value;
            r.validate();
        } else {
            // kappa2_<band>_<port>, validated at parse time.
            const std::size_t us = sweep.parameter.rfind('_');
            const Band band = band_from_string(
                sweep.parameter.substr(7, us - 7));
            const Port port = port_from_string(sweep.parameter.substr(us + 1));
            c.set_kappa2(band, port, value);
            c.validate();
        }
        csv += format_sig9(value);
        csv += ',';
        csv += format_sig9(eta_max_couplings(r, c));
        csv += '\n';
    }
    ctx.emit("sweep.csv", csv);
    ctx.summary << "sweep: " << sweep.parameter << " over ["
                << format_sig9(sweep.from) << ", " << format_sig9(sweep.to)
                << "], " << sweep.points << " points -> sweep.csv\n";
}

void run_fit(TaskContext& ctx) {
    if (ctx.cfg.synth.empty() && !ctx.cfg.external_fit) {
        missing(Task::fit, "$.spectra.synth or $.spectra.fit");
    }

    ojson fits = ojson::array();
    for (std::size_t i = 0; i < ctx.cfg.synth.size(); ++i) {
        const SynthEntry& entry = ctx.cfg.synth[i];
        const RingParams& ring = need_ring(ctx, Task::fit);

        const double omega = omega_from_wavelength_nm(entry.lambda0_nm);
        SynthSpec spec;
        spec.band = entry.band;
        spec.lambda0_nm = entry.lambda0_nm;
        spec.kappa0 = omega / entry.q_intrinsic;
        spec.kappa_ext_in = omega / entry.q_loaded - spec.kappa0;
        spec.n_group = entry.n_group;
        spec.noise_sigma = entry.noise_sigma;
        spec.seed = entry.seed;

        const std::vector<double> grid =
            resonance_grid(entry.lambda0_nm, spec.fwhm_nm(), entry.span_linewidths,
                           entry.samples_per_linewidth);
        const SpectrumTrace trace = synth_transmission(ring, spec, grid);
        const std::string trace_name = std::string("trace_") +
                                       to_string(entry.band) + "_" +
                                       std::to_string(i) + ".csv";
        ctx.emit(trace_name, trace_csv(trace));

        const ResonanceFit fit = fit_resonance(trace, entry.hint());
        ojson item;
        item["band"] = to_string(entry.band);
        item["trace_csv"] = trace_name;
        ojson input;
        input["lambda0_nm"] = num(entry.lambda0_nm);
        input["q0"] = num(entry.q_intrinsic);
        input["ql"] = num(entry.q_loaded);
        item["input"] = input;
        ojson fitted;
        fitted["lambda0_nm"] = num(fit.lambda0_nm);
        fitted["fwhm_nm"] = num(fit.fwhm_nm);
        fitted["t0"] = num(fit.t0);
        fitted["q_loaded"] = num(fit.q_loaded);
        fitted["q_intrinsic"] = num(fit.q_intrinsic);
        fitted["regime"] = to_string(fit.regime);
        fitted["residual_rms"] = num(fit.residual_rms);
        item["fit"] = fitted;
        ojson err;
        err["q0"] = num(fit.q_intrinsic / entry.q_intrinsic - 1.0);
        err["ql"] = num(fit.q_loaded / entry.q_loaded - 1.0);
        item["recovered_rel_error"] = err;
        fits.push_back(item);
    }

    if (ctx.cfg.external_fit) {
        const ExternalFit& ext = *ctx.cfg.external_fit;
        const SpectrumTrace trace =
            trace_from_csv(read_file(ext.trace_csv), ext.band);
        const ResonanceFit fit = fit_resonance(trace, ext.regime_hint);
        ojson item;
        item["band"] = to_string(ext.band);
        item["source"] = ext.trace_csv.string();
        ojson fitted;
        fitted["lambda0_nm"] = num(fit.lambda0_nm);
        fitted["fwhm_nm"] = num(fit.fwhm_nm);
        fitted["t0"] = num(fit.t0);
        fitted["q_loaded"] = num(fit.q_loaded);
        fitted["q_intrinsic"] = num(fit.q_intrinsic);
        fitted["regime"] = to_string(fit.regime);
        fitted["residual_rms"] = num(fit.residual_rms);
        item["fit"] = fitted;
        fits.push_back(item);
    }

    ojson report;
    report["fits"] = fits;
    ctx.emit_json("resonance_fit.json", report);
    ctx.summary << "fit: " << fits.size()
                << " resonance(s) -> resonance_fit.json\n";
}

void run_bend(TaskContext& ctx) {
    if (!ctx.cfg.bend && !ctx.cfg.taper) {
        missing(Task::bend, "$.layout");
    }
    ojson report;
    if (ctx.cfg.bend) {
        const BendTask& task = *ctx.cfg.bend;
        const PathPolyline path = euler_bend_path(task.spec, task.n_samples);
        ctx.emit("euler_bend.csv", path_csv(path));

        const double rotation = path.theta_rad.back() - path.theta_rad.front();
        ojson bend;
        bend["r_max_um"] = num(task.spec.r_max_um);
        bend["r_min_um"] = num(task.spec.r_min_um);
        bend["arc_length_um"] = num(bend_arc_length_um(task.spec));
        bend["rotation_rad"] = num(rotation);
        bend["endpoint_dx_um"] = num(path.x_um.back() - path.x_um.front());
        bend["endpoint_dy_um"] = num(path.y_um.back() - path.y_um.front());
        if (std::fabs(std::fabs(rotation) - kPi / 2.0) <= 1e-6) {
            bend["effective_radius_um"] = num(effective_radius_um(path));
        }
        report["euler_bend"] = bend;
    }
    if (ctx.cfg.taper) {
        const TaperTask& task = *ctx.cfg.taper;
        const PathPolyline path = taper_profile(task.spec, task.n_samples);
        ctx.emit("taper.csv", path_csv(path));
        ojson taper;
        taper["w_in_nm"] = num(task.spec.w_in_nm);
        taper["w_out_nm"] = num(task.spec.w_out_nm);
        taper["length_um"] = num(task.spec.length_um);
        taper["kind"] = to_string(task.spec.kind);
        taper["quoted_loss_db"] = num(task.spec.quoted_loss_db);
        report["taper"] = taper;
    }
    ctx.emit_json("bend_report.json", report);
    ctx.summary << "bend:";
    if (ctx.cfg.bend) {
        ctx.summary << " euler_bend.csv";
    }
    if (ctx.cfg.taper) {
        ctx.summary << " taper.csv";
    }
    ctx.summary << " -> bend_report.json\n";
}

void run_budget(TaskContext& ctx) {
    if (!ctx.cfg.budget) {
        missing(Task::budget, "$.budget");
    }
    const BudgetSection& section = *ctx.cfg.budget;

    const int channels = channel_count(section.budget);
    ojson report;
    report["source_mw"] = num(section.budget.source_mw);
    report["eta_couple"] = num(section.budget.eta_couple);
    report["per_channel_uw"] = num(section.budget.per_channel_uw);
    report["channel_count"] = channels;

    if (!section.chain.stages.empty()) {
        const ChainEfficiency eff = chain_efficiency(section.chain);
        ojson chain;
        ojson stages = ojson::array();
        for (const LossStage& stage : section.chain.stages) {
            ojson s;
            s["name"] = stage.name;
            s["efficiency"] = num(stage.efficiency);
            stages.push_back(s);
        }
        chain["stages"] = stages;
        chain["fraction"] = num(eff.fraction);
        chain["loss_db"] = num(eff.db);
        report["chain"] = chain;
    }

    if (section.dfb) {
        const DfbTuning& dfb = *section.dfb;
        ojson d;
        d["lambda0_nm"] = num(dfb.lambda0_nm);
        d["t0_c"] = num(dfb.t0_c);
        d["slope_pm_per_c"] = num(dfb.slope_pm_per_c);
        ojson queries = ojson::array();
        for (double t : section.dfb_query_c) {
            ojson q;
            q["t_c"] = num(t);
            q["lambda_nm"] = num(dfb_wavelength_nm(dfb, t));
            queries.push_back(q);
        }
        d["queries"] = queries;
        report["dfb"] = d;
    }

    report["noise_cps_at_per_channel"] =
        num(section.noise.at(section.budget.per_channel_uw * 1e-6));
    if (section.chip_temperature_c) {
        report["chip_temperature_c"] = num(*section.chip_temperature_c);
    }
    ctx.emit_json("budget_report.json", report);
    ctx.summary << "budget: channels=" << channels << " -> budget_report.json\n";
}

} // namespace

RunResult run_config(const Config& cfg, const std::vector<Task>& tasks,
                     const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunResult result;
    TaskContext ctx{cfg, out_dir, result, {}};

    for (Task task : tasks) {
        log_info("running task '" + to_string(task) + "'");
        switch (task) {
            case Task::design: run_design(ctx); break;
            case Task::simulate: run_simulate(ctx); break;
            case Task::sweep: run_sweep(ctx); break;
            case Task::fit: run_fit(ctx); break;
            case Task::bend: run_bend(ctx); break;
            case Task::budget: run_budget(ctx); break;
        }
    }

    ojson report;
    ojson names = ojson::array();
    for (Task task : tasks) {
        names.push_back(to_string(task));
    }
    report["tasks_run"] = names;
    ojson outputs = ojson::array();
    for (const std::string& name : result.outputs) {
        outputs.push_back(name);
    }
    report["outputs"] = outputs;
    ctx.emit_json("report.json", report);

    ctx.summary << "report: " << (out_dir / "report.json").string() << "\n";
    result.summary = ctx.summary.str();
    return result;
}

} // namespace qfc
