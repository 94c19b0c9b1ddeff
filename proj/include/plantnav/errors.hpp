#pragma once

#include <stdexcept>
#include <string>

namespace plantnav {

// Exit-code taxonomy used by the CLI: config/schema problems exit 2,
// world/data problems exit 3, numerical aborts exit 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WorldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Checkpoint files are configuration inputs, so their failures exit 2.
struct CheckpointError : ConfigError {
    enum class Kind { Io, BadMagic, BadShape, Truncated, LayoutMismatch };

    CheckpointError(Kind k, const std::string& msg) : ConfigError(msg), kind(k) {}

    Kind kind;
};

}  // namespace plantnav
