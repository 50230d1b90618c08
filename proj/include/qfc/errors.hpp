#pragma once

#include <stdexcept>
#include <string>

namespace qfc {

// Failure categories used across the toolkit. The CLI maps `config` onto
// exit code 2 and everything else onto 1; an unreadable config file is
// reported as `config`, not `io`.
enum class errc {
    range,
    degenerate_input,
    invalid_order,
    singular_ratio,
    invariant_violation,
    regime,
    no_solution,
    no_conversion,
    convergence,
    detection,
    multiplicity,
    sampling,
    division,
    empty_input,
    contract,
    config,
    io,
};

const char* to_string(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qfc
