#include "qfc/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace qfc {

namespace {

LogLevel parse_level() {
    const char* env = std::getenv("QFC_LOG");
    if (env == nullptr) {
        return LogLevel::warn;
    }
    if (std::strcmp(env, "error") == 0) return LogLevel::error;
    if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::warn;
}

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

} // namespace

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

void log(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) {
        return;
    }
    std::fprintf(stderr, "qfc %s: %s\n", level_name(level), message.c_str());
}

} // namespace qfc
