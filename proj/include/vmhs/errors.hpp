#pragma once

#include <stdexcept>
#include <string>

namespace vmhs {

// Invalid user-facing configuration: CLI flags, config files, constructor preconditions.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values or discrete instability detected during evolution.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Checkpoint/CSV format violations and filesystem failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vmhs
