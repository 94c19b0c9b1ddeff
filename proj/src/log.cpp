#include "plantnav/log.hpp"

#include <cstdlib>
#include <iostream>

namespace plantnav {
namespace {

LogLevel parse_level() {
    const char* env = std::getenv("PLANTNAV_LOG_LEVEL");
    if (!env) return LogLevel::Warn;
    const std::string v(env);
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

void emit(LogLevel level, const char* tag, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
    std::cerr << tag << msg << '\n';
}

}  // namespace

LogLevel log_threshold() {
    static const LogLevel level = parse_level();
    return level;
}

void log_error(const std::string& msg) { emit(LogLevel::Error, "[error] ", msg); }
void log_warn(const std::string& msg) { emit(LogLevel::Warn, "[warn] ", msg); }
void log_info(const std::string& msg) { emit(LogLevel::Info, "[info] ", msg); }
void log_debug(const std::string& msg) { emit(LogLevel::Debug, "[debug] ", msg); }

}  // namespace plantnav
