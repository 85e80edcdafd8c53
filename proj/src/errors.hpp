#pragma once

#include <stdexcept>
#include <string>

namespace sn {

// Error taxonomy shared by all modules.  The C wrapper maps these onto the
// numeric codes exposed in sentinet.h (and the CLI onto its exit codes).

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& msg, int line_no = 0)
        : std::runtime_error(msg), line(line_no) {}
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientComponentSize : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleConnectivity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotObservable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthesisFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnstableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyNetwork : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sn
