#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qfc/dispersion.hpp"
#include "qfc/layout.hpp"
#include "qfc/ring.hpp"
#include "qfc/spectra.hpp"
#include "qfc/system.hpp"

namespace qfc {

enum class Task { design, simulate, sweep, fit, bend, budget };

std::string to_string(Task task);
Task task_from_string(const std::string& text);

struct CalibrationInput {
    double eta_max = 0.0;
    double p_opt_w = 0.0;
};

struct PumpSweepRange {
    double from_w = 0.0;
    double to_w = 0.0;
    int points = 0;
};

// Synthesis-and-refit job for one resonance. The regime hint may be given
// explicitly; otherwise it follows from the inputs (over-coupled iff
// kappa_ext > kappa0, i.e. q0 > 2 ql).
struct SynthEntry {
    Band band = Band::signal;
    double lambda0_nm = 0.0;
    double q_intrinsic = 0.0;
    double q_loaded = 0.0;
    double n_group = 2.2;
    double span_linewidths = 8.0;
    double samples_per_linewidth = 25.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
    std::optional<CouplingRegime> regime_hint;

    CouplingRegime hint() const;
};

struct ExternalFit {
    std::filesystem::path trace_csv;
    Band band = Band::signal;
    CouplingRegime regime_hint = CouplingRegime::over;
};

struct BendTask {
    EulerBendSpec spec;
    std::size_t n_samples = 4097;
};

struct TaperTask {
    TaperSpec spec;
    std::size_t n_samples = 65;
};

struct BudgetSection {
    PowerBudget budget;
    LossChain chain;
    std::optional<DfbTuning> dfb;
    std::vector<double> dfb_query_c;
    NoiseModel noise;
    // Recorded as metadata only; no thermo-optic model behind it.
    std::optional<double> chip_temperature_c;
};

struct ParamSweep {
    std::string parameter;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

struct Config {
    IndexModelSet models = default_index_models();
    double group_index_fallback = 2.2;
    // Group index per band for FSR and Q bridging; constant-index models
    // carry no slope, so these are stated, not derived.
    std::array<double, 3> group_index{2.2, 2.2, 2.2};

    std::optional<RingParams> ring;
    std::optional<CouplerSpec> couplers;
    std::optional<ModeTriple> triple;
    std::optional<QSet> q_factors;

    std::optional<CalibrationInput> calibration;
    std::optional<PumpSweepRange> pump_sweep;
    double signal_power_w = 20e-9;

    std::vector<SynthEntry> synth;
    std::optional<ExternalFit> external_fit;
    std::optional<DcModel> dc;

    std::optional<BendTask> bend;
    std::optional<TaperTask> taper;

    std::optional<BudgetSection> budget;

    std::vector<Task> tasks;
    std::optional<ParamSweep> sweep;
};

// Strict schema: unknown keys, wrong types, and failed invariants all raise
// config errors naming the JSON path of the offending field.
Config parse_config(const std::string& json_text);
Config load_config(const std::filesystem::path& path);

} // namespace qfc
