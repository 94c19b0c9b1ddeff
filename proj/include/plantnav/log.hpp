#pragma once

#include <string>

namespace plantnav {

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Threshold comes from PLANTNAV_LOG_LEVEL (error|warn|info|debug), read once;
// unset or unrecognised values fall back to warn. Output goes to stderr so
// CSV/JSON on stdout stays clean.
LogLevel log_threshold();

void log_error(const std::string& msg);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace plantnav
