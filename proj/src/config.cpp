#include "qfc/config.hpp"

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "qfc/errors.hpp"
#include "qfc/io.hpp"

namespace qfc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(errc::config, path + ": " + what);
}

// Re-raises invariant failures from domain validate() calls as config errors
// carrying the JSON path.
template <typename F>
void validate_at(const std::string& path, F&& f) {
    try {
        f();
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

void check_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        bad(path, "must be an object");
    }
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    check_object(j, path);
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            bad(path + "." + item.key(), "unknown field");
        }
    }
}

const json* opt_member(const json& j, const std::string& path, const char* key) {
    check_object(j, path);
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (const json* m = opt_member(j, path, key)) {
        return *m;
    }
    bad(path + "." + key, "required field missing");
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        bad(path, "must be a number");
    }
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        bad(path, "must be an integer");
    }
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        bad(path, "must be a string");
    }
    return j.get<std::string>();
}

double req_num(const json& j, const std::string& path, const char* key) {
    return as_number(member(j, path, key), path + "." + key);
}

double opt_num(const json& j, const std::string& path, const char* key,
               double fallback) {
    const json* m = opt_member(j, path, key);
    return m ? as_number(*m, path + "." + key) : fallback;
}

int opt_int(const json& j, const std::string& path, const char* key,
            int fallback) {
    const json* m = opt_member(j, path, key);
    return m ? as_int(*m, path + "." + key) : fallback;
}

std::string req_str(const json& j, const std::string& path, const char* key) {
    return as_string(member(j, path, key), path + "." + key);
}

Band parse_band(const json& j, const std::string& path) {
    Band band = Band::signal;
    validate_at(path, [&] { band = band_from_string(as_string(j, path)); });
    return band;
}

void parse_dispersion(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"models", "group_index_fallback", "group_index"});
    cfg.group_index_fallback = opt_num(j, path, "group_index_fallback", 2.2);
    cfg.group_index.fill(cfg.group_index_fallback);

    if (const json* models = opt_member(j, path, "models")) {
        if (!models->is_array()) {
            bad(path + ".models", "must be an array");
        }
        for (std::size_t i = 0; i < models->size(); ++i) {
            const std::string p = path + ".models[" + std::to_string(i) + "]";
            const json& m = (*models)[i];
            check_keys(m, p, {"band", "center_nm", "coeffs", "range_nm"});
            IndexModel model;
            model.band = parse_band(member(m, p, "band"), p + ".band");
            model.center_nm = req_num(m, p, "center_nm");
            const json& coeffs = member(m, p, "coeffs");
            if (!coeffs.is_array() || coeffs.empty()) {
                bad(p + ".coeffs", "must be a nonempty array");
            }
            for (std::size_t k = 0; k < coeffs.size(); ++k) {
                model.coeffs.push_back(
                    as_number(coeffs[k], p + ".coeffs[" + std::to_string(k) + "]"));
            }
            const json& range = member(m, p, "range_nm");
            if (!range.is_array() || range.size() != 2) {
                bad(p + ".range_nm", "must be [lo, hi]");
            }
            model.range_lo_nm = as_number(range[0], p + ".range_nm[0]");
            model.range_hi_nm = as_number(range[1], p + ".range_nm[1]");
            validate_at(p, [&] { model.validate(); });
            cfg.models.for_band(model.band) = model;
        }
    }

    if (const json* g = opt_member(j, path, "group_index")) {
        const std::string p = path + ".group_index";
        check_keys(*g, p, {"signal", "pump", "sf"});
        for (Band band : {Band::signal, Band::pump, Band::sf}) {
            const std::string key = to_string(band);
            if (const json* v = opt_member(*g, p, key.c_str())) {
                const double n = as_number(*v, p + "." + key);
                if (!(n > 0.0)) {
                    bad(p + "." + key, "must be positive");
                }
                cfg.group_index[static_cast<std::size_t>(band)] = n;
            }
        }
    }
}

void parse_couplers(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path,
               {"kappa2_signal_A", "kappa2_signal_B", "kappa2_pump_A",
                "kappa2_pump_B", "kappa2_sf_A", "kappa2_sf_B", "geometry"});
    CouplerSpec c;
    for (Band band : {Band::signal, Band::pump, Band::sf}) {
        for (Port port : {Port::A, Port::B}) {
            const std::string key = std::string("kappa2_") + to_string(band) +
                                    "_" + to_string(port);
            c.set_kappa2(band, port, req_num(j, path, key.c_str()));
        }
    }
    if (const json* g = opt_member(j, path, "geometry")) {
        const std::string p = path + ".geometry";
        check_keys(*g, p, {"A", "B"});
        for (Port port : {Port::A, Port::B}) {
            const std::string key = to_string(port);
            if (const json* pg = opt_member(*g, p, key.c_str())) {
                const std::string pp = p + "." + key;
                check_keys(*pg, pp, {"w_wg_nm", "gap_nm"});
                c.geometry[static_cast<std::size_t>(port)] = PortGeometry{
                    req_num(*pg, pp, "w_wg_nm"), req_num(*pg, pp, "gap_nm")};
            }
        }
    }
    validate_at(path, [&] { c.validate(); });
    cfg.couplers = c;
}

void parse_ring(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"radius_um", "w_ring_um", "alpha_db_per_cm", "couplers"});
    validate_at(path, [&] {
        cfg.ring = RingParams::from_radius(req_num(j, path, "radius_um"),
                                           req_num(j, path, "w_ring_um"),
                                           req_num(j, path, "alpha_db_per_cm"));
    });
    if (const json* c = opt_member(j, path, "couplers")) {
        parse_couplers(*c, path + ".couplers", cfg);
    }
}

void parse_triple(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path,
               {"m_s", "m_p", "m_sf", "lambda_s_nm", "lambda_p_nm",
                "lambda_sf_nm", "energy_tol_rel"});
    ModeTriple t;
    t.m_s = as_int(member(j, path, "m_s"), path + ".m_s");
    t.m_p = as_int(member(j, path, "m_p"), path + ".m_p");
    t.m_sf = as_int(member(j, path, "m_sf"), path + ".m_sf");
    t.lambda_s_nm = req_num(j, path, "lambda_s_nm");
    t.lambda_p_nm = req_num(j, path, "lambda_p_nm");
    t.lambda_sf_nm = req_num(j, path, "lambda_sf_nm");
    const double tol = opt_num(j, path, "energy_tol_rel", 1e-4);
    validate_at(path, [&] {
        t.poling_order = qpm_order(t.m_s, t.m_p, t.m_sf);
        t.validate(tol);
    });
    cfg.triple = t;
}

void parse_q_factors(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"signal", "pump", "sf"});
    QSet qs;
    for (Band band : {Band::signal, Band::pump, Band::sf}) {
        const std::string key = to_string(band);
        const std::string p = path + "." + key;
        const json& m = member(j, path, key.c_str());
        check_keys(m, p, {"q0", "ql"});
        QPair& pair = band == Band::signal  ? qs.signal
                      : band == Band::pump ? qs.pump
                                           : qs.sf;
        pair.q_intrinsic = req_num(m, p, "q0");
        pair.q_loaded = req_num(m, p, "ql");
        validate_at(p, [&] { pair.validate(); });
    }
    cfg.q_factors = qs;
}

void parse_cmt(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"calibration", "pump_sweep", "signal_power_nw"});
    if (const json* c = opt_member(j, path, "calibration")) {
        const std::string p = path + ".calibration";
        check_keys(*c, p, {"eta_max", "p_opt_uw"});
        CalibrationInput cal;
        cal.eta_max = req_num(*c, p, "eta_max");
        cal.p_opt_w = req_num(*c, p, "p_opt_uw") * 1e-6;
        if (!(cal.eta_max > 0.0) || !(cal.eta_max < 1.0)) {
            bad(p + ".eta_max", "must be in (0, 1)");
        }
        if (!(cal.p_opt_w > 0.0)) {
            bad(p + ".p_opt_uw", "must be positive");
        }
        cfg.calibration = cal;
    }
    if (const json* s = opt_member(j, path, "pump_sweep")) {
        const std::string p = path + ".pump_sweep";
        check_keys(*s, p, {"from_uw", "to_uw", "points"});
        PumpSweepRange sweep;
        sweep.from_w = req_num(*s, p, "from_uw") * 1e-6;
        sweep.to_w = req_num(*s, p, "to_uw") * 1e-6;
        sweep.points = as_int(member(*s, p, "points"), p + ".points");
        if (!(sweep.from_w > 0.0) || !(sweep.to_w > sweep.from_w)) {
            bad(p, "needs 0 < from_uw < to_uw");
        }
        if (sweep.points < 2) {
            bad(p + ".points", "must be at least 2");
        }
        cfg.pump_sweep = sweep;
    }
    const double signal_nw = opt_num(j, path, "signal_power_nw", 20.0);
    if (!(signal_nw > 0.0)) {
        bad(path + ".signal_power_nw", "must be positive");
    }
    cfg.signal_power_w = signal_nw * 1e-9;
}

void parse_spectra(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"synth", "fit", "dc"});
    if (const json* synth = opt_member(j, path, "synth")) {
        if (!synth->is_array()) {
            bad(path + ".synth", "must be an array");
        }
        for (std::size_t i = 0; i < synth->size(); ++i) {
            const std::string p = path + ".synth[" + std::to_string(i) + "]";
            const json& m = (*synth)[i];
            check_keys(m, p,
                       {"band", "lambda0_nm", "q0", "ql", "n_group",
                        "span_linewidths", "samples_per_linewidth", "noise_sigma",
                        "seed", "regime_hint"});
            SynthEntry entry;
            entry.band = parse_band(member(m, p, "band"), p + ".band");
            entry.lambda0_nm = req_num(m, p, "lambda0_nm");
            entry.q_intrinsic = req_num(m, p, "q0");
            entry.q_loaded = req_num(m, p, "ql");
            entry.n_group = opt_num(
                m, p, "n_group",
                cfg.group_index[static_cast<std::size_t>(entry.band)]);
            entry.span_linewidths = opt_num(m, p, "span_linewidths", 8.0);
            entry.samples_per_linewidth = opt_num(m, p, "samples_per_linewidth", 25.0);
            entry.noise_sigma = opt_num(m, p, "noise_sigma", 0.0);
            const int seed = opt_int(m, p, "seed", 1);
            if (seed < 0) {
                bad(p + ".seed", "must be non-negative");
            }
            entry.seed = static_cast<std::uint64_t>(seed);
            if (const json* h = opt_member(m, p, "regime_hint")) {
                validate_at(p + ".regime_hint", [&] {
                    entry.regime_hint =
                        regime_from_string(as_string(*h, p + ".regime_hint"));
                });
            }
            validate_at(
                p, [&] { QPair{entry.q_intrinsic, entry.q_loaded}.validate(); });
            if (!(entry.lambda0_nm > 0.0)) {
                bad(p + ".lambda0_nm", "must be positive");
            }
            cfg.synth.push_back(entry);
        }
    }
    if (const json* f = opt_member(j, path, "fit")) {
        const std::string p = path + ".fit";
        check_keys(*f, p, {"trace_csv", "band", "regime_hint"});
        ExternalFit fit;
        fit.trace_csv = req_str(*f, p, "trace_csv");
        if (const json* b = opt_member(*f, p, "band")) {
            fit.band = parse_band(*b, p + ".band");
        }
        validate_at(p + ".regime_hint", [&] {
            fit.regime_hint = regime_from_string(req_str(*f, p, "regime_hint"));
        });
        cfg.external_fit = fit;
    }
    if (const json* d = opt_member(j, path, "dc")) {
        const std::string p = path + ".dc";
        check_keys(*d, p,
                   {"length_um", "lambda_ref_nm", "cross_ref",
                    "theta_slope_per_nm", "excess_loss_db", "band_nm"});
        DcModel dc;
        dc.length_um = req_num(*d, p, "length_um");
        dc.lambda_ref_nm = req_num(*d, p, "lambda_ref_nm");
        dc.cross_ref = req_num(*d, p, "cross_ref");
        dc.theta_slope_per_nm = req_num(*d, p, "theta_slope_per_nm");
        dc.excess_loss_db = opt_num(*d, p, "excess_loss_db", 0.0);
        const json& band = member(*d, p, "band_nm");
        if (!band.is_array() || band.size() != 2) {
            bad(p + ".band_nm", "must be [lo, hi]");
        }
        dc.band_lo_nm = as_number(band[0], p + ".band_nm[0]");
        dc.band_hi_nm = as_number(band[1], p + ".band_nm[1]");
        validate_at(p, [&] { dc.validate(); });
        cfg.dc = dc;
    }
}

void parse_layout(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"euler_bend", "taper"});
    if (const json* b = opt_member(j, path, "euler_bend")) {
        const std::string p = path + ".euler_bend";
        check_keys(*b, p,
                   {"r_max_um", "r_min_um", "total_angle_deg", "width_nm",
                    "n_samples"});
        BendTask bend;
        bend.spec.r_max_um = req_num(*b, p, "r_max_um");
        bend.spec.r_min_um = req_num(*b, p, "r_min_um");
        bend.spec.total_angle_rad =
            req_num(*b, p, "total_angle_deg") * kPi / 180.0;
        bend.spec.width_nm = opt_num(*b, p, "width_nm", 0.0);
        const int n = opt_int(*b, p, "n_samples", 4097);
        if (n < 64) {
            bad(p + ".n_samples", "must be at least 64");
        }
        bend.n_samples = static_cast<std::size_t>(n);
        validate_at(p, [&] { bend.spec.validate(); });
        cfg.bend = bend;
    }
    if (const json* t = opt_member(j, path, "taper")) {
        const std::string p = path + ".taper";
        check_keys(*t, p,
                   {"w_in_nm", "w_out_nm", "length_um", "kind", "quoted_loss_db",
                    "n_samples"});
        TaperTask taper;
        taper.spec.w_in_nm = req_num(*t, p, "w_in_nm");
        taper.spec.w_out_nm = req_num(*t, p, "w_out_nm");
        taper.spec.length_um = req_num(*t, p, "length_um");
        if (const json* k = opt_member(*t, p, "kind")) {
            validate_at(p + ".kind", [&] {
                taper.spec.kind = taper_kind_from_string(as_string(*k, p + ".kind"));
            });
        }
        taper.spec.quoted_loss_db = opt_num(*t, p, "quoted_loss_db", 0.0);
        const int n = opt_int(*t, p, "n_samples", 65);
        if (n < 2) {
            bad(p + ".n_samples", "must be at least 2");
        }
        taper.n_samples = static_cast<std::size_t>(n);
        validate_at(p, [&] { taper.spec.validate(); });
        cfg.taper = taper;
    }
}

void parse_budget(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path,
               {"source_mw", "eta_couple", "per_channel_uw", "loss_chain", "dfb",
                "noise", "chip_temperature_c"});
    BudgetSection section;
    section.budget.source_mw = req_num(j, path, "source_mw");
    section.budget.eta_couple = req_num(j, path, "eta_couple");
    section.budget.per_channel_uw = req_num(j, path, "per_channel_uw");
    validate_at(path, [&] { section.budget.validate(); });

    if (const json* chain = opt_member(j, path, "loss_chain")) {
        if (!chain->is_array()) {
            bad(path + ".loss_chain", "must be an array");
        }
        for (std::size_t i = 0; i < chain->size(); ++i) {
            const std::string p = path + ".loss_chain[" + std::to_string(i) + "]";
            const json& stage = (*chain)[i];
            check_keys(stage, p, {"name", "efficiency"});
            section.chain.stages.push_back(
                {req_str(stage, p, "name"), req_num(stage, p, "efficiency")});
        }
        validate_at(path + ".loss_chain", [&] { section.chain.validate(); });
    }

    if (const json* dfb = opt_member(j, path, "dfb")) {
        const std::string p = path + ".dfb";
        check_keys(*dfb, p,
                   {"lambda0_nm", "t0_c", "slope_pm_per_c", "t_min_c", "t_max_c",
                    "query_c"});
        DfbTuning tuning;
        tuning.lambda0_nm = req_num(*dfb, p, "lambda0_nm");
        tuning.t0_c = req_num(*dfb, p, "t0_c");
        tuning.slope_pm_per_c = opt_num(*dfb, p, "slope_pm_per_c", 85.5);
        tuning.t_min_c = opt_num(*dfb, p, "t_min_c", 15.0);
        tuning.t_max_c = opt_num(*dfb, p, "t_max_c", 60.0);
        validate_at(p, [&] { tuning.validate(); });
        section.dfb = tuning;
        if (const json* q = opt_member(*dfb, p, "query_c")) {
            if (!q->is_array()) {
                bad(p + ".query_c", "must be an array");
            }
            for (std::size_t i = 0; i < q->size(); ++i) {
                section.dfb_query_c.push_back(
                    as_number((*q)[i], p + ".query_c[" + std::to_string(i) + "]"));
            }
        }
    }

    if (const json* noise = opt_member(j, path, "noise")) {
        const std::string p = path + ".noise";
        check_keys(*noise, p, {"c1_cps_per_w", "c2_cps_per_w2"});
        section.noise.c1_cps_per_w =
            opt_num(*noise, p, "c1_cps_per_w", section.noise.c1_cps_per_w);
        section.noise.c2_cps_per_w2 =
            opt_num(*noise, p, "c2_cps_per_w2", section.noise.c2_cps_per_w2);
        validate_at(p, [&] { section.noise.validate(); });
    }

    if (const json* chip = opt_member(j, path, "chip_temperature_c")) {
        section.chip_temperature_c = as_number(*chip, path + ".chip_temperature_c");
    }
    cfg.budget = section;
}

void parse_sweep(const json& j, const std::string& path, Config& cfg) {
    check_keys(j, path, {"parameter", "from", "to", "points"});
    ParamSweep sweep;
    sweep.parameter = req_str(j, path, "parameter");
    sweep.from = req_num(j, path, "from");
    sweep.to = req_num(j, path, "to");
    sweep.points = as_int(member(j, path, "points"), path + ".points");
    static const char* kAllowed[] = {"kappa2_signal_A", "kappa2_signal_B",
                                     "kappa2_pump_A",   "kappa2_pump_B",
                                     "kappa2_sf_A",     "kappa2_sf_B",
                                     "alpha_db_per_cm"};
    bool known = false;
    for (const char* name : kAllowed) {
        known = known || sweep.parameter == name;
    }
    if (!known) {
        bad(path + ".parameter", "unknown sweep parameter '" + sweep.parameter + "'");
    }
    if (sweep.points < 2) {
        bad(path + ".points", "must be at least 2");
    }
    if (!(sweep.to > sweep.from)) {
        bad(path, "needs from < to");
    }
    cfg.sweep = sweep;
}

} // namespace

std::string to_string(Task task) {
    switch (task) {
        case Task::design: return "design";
        case Task::simulate: return "simulate";
        case Task::sweep: return "sweep";
        case Task::fit: return "fit";
        case Task::bend: return "bend";
        case Task::budget: return "budget";
    }
    return "design";
}

Task task_from_string(const std::string& text) {
    if (text == "design") return Task::design;
    if (text == "simulate") return Task::simulate;
    if (text == "sweep") return Task::sweep;
    if (text == "fit") return Task::fit;
    if (text == "bend") return Task::bend;
    if (text == "budget") return Task::budget;
    fail(errc::config, "unknown task '" + text + "'");
}

CouplingRegime SynthEntry::hint() const {
    if (regime_hint) {
        return *regime_hint;
    }
    return q_intrinsic > 2.0 * q_loaded ? CouplingRegime::over
                                        : CouplingRegime::under;
}

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(errc::config, std::string("invalid JSON: ") + e.what());
    }
    check_keys(root, "$",
               {"dispersion", "ring", "triple", "q_factors", "cmt", "spectra",
                "layout", "budget", "tasks", "sweep"});

    Config cfg;
    if (const json* d = opt_member(root, "$", "dispersion")) {
        parse_dispersion(*d, "$.dispersion", cfg);
    }
    if (const json* r = opt_member(root, "$", "ring")) {
        parse_ring(*r, "$.ring", cfg);
    }
    if (const json* t = opt_member(root, "$", "triple")) {
        parse_triple(*t, "$.triple", cfg);
    }
    if (const json* q = opt_member(root, "$", "q_factors")) {
        parse_q_factors(*q, "$.q_factors", cfg);
    }
    if (const json* c = opt_member(root, "$", "cmt")) {
        parse_cmt(*c, "$.cmt", cfg);
    }
    if (const json* s = opt_member(root, "$", "spectra")) {
        parse_spectra(*s, "$.spectra", cfg);
    }
    if (const json* l = opt_member(root, "$", "layout")) {
        parse_layout(*l, "$.layout", cfg);
    }
    if (const json* b = opt_member(root, "$", "budget")) {
        parse_budget(*b, "$.budget", cfg);
    }
    if (const json* tasks = opt_member(root, "$", "tasks")) {
        if (!tasks->is_array()) {
            bad("$.tasks", "must be an array");
        }
        for (std::size_t i = 0; i < tasks->size(); ++i) {
            const std::string p = "$.tasks[" + std::to_string(i) + "]";
            validate_at(p, [&] {
                cfg.tasks.push_back(task_from_string(as_string((*tasks)[i], p)));
            });
        }
    }
    if (const json* s = opt_member(root, "$", "sweep")) {
        parse_sweep(*s, "$.sweep", cfg);
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        fail(errc::config, e.what());
    }
    return parse_config(text);
}

} // namespace qfc
