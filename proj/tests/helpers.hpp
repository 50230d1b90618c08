#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qfc/errors.hpp"

// Runs f and reports the qfc error code it threw, if any.
template <typename F>
std::optional<qfc::errc> thrown_code(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const qfc::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

template <typename F>
std::string thrown_message(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const qfc::Error& e) {
        return e.what();
    }
    return {};
}
