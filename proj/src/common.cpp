#include "qfc/common.hpp"

#include "qfc/errors.hpp"

namespace qfc {

const char* to_string(Band band) {
    switch (band) {
        case Band::signal: return "signal";
        case Band::pump: return "pump";
        case Band::sf: return "sf";
    }
    return "?";
}

const char* to_string(Port port) {
    return port == Port::A ? "A" : "B";
}

Band band_from_string(std::string_view name) {
    if (name == "signal") return Band::signal;
    if (name == "pump") return Band::pump;
    if (name == "sf") return Band::sf;
    fail(errc::config, "unknown band '" + std::string(name) + "' (expected signal|pump|sf)");
}

Port port_from_string(std::string_view name) {
    if (name == "A") return Port::A;
    if (name == "B") return Port::B;
    fail(errc::config, "unknown port '" + std::string(name) + "' (expected A|B)");
}

const char* to_string(errc code) {
    switch (code) {
        case errc::range: return "range";
        case errc::degenerate_input: return "degenerate-input";
        case errc::invalid_order: return "invalid-order";
        case errc::singular_ratio: return "singular-ratio";
        case errc::invariant_violation: return "invariant-violation";
        case errc::regime: return "regime";
        case errc::no_solution: return "no-solution";
        case errc::no_conversion: return "no-conversion";
        case errc::convergence: return "convergence";
        case errc::detection: return "detection";
        case errc::multiplicity: return "multiplicity";
        case errc::sampling: return "sampling";
        case errc::division: return "division";
        case errc::empty_input: return "empty-input";
        case errc::contract: return "contract";
        case errc::config: return "config";
        case errc::io: return "io";
    }
    return "?";
}

} // namespace qfc
