#pragma once

#include <stdexcept>
#include <string>

namespace bmnb {

/// Bad configuration: unknown schema, invalid parameter ranges, malformed
/// config files. CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad data: parse failures, schema mismatches, degenerate strata. CLI exit
/// code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure inside the modelling pipeline itself. CLI exit code 3.
struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bmnb
