#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nami {

/// Base class for all library errors. Contract violations (bad input,
/// mismatched universes, invalid orders) throw subclasses of this.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an operation would exceed a size cap (independence
/// enumeration above the variable cap, joint tables above 2^20 states).
struct SizeCapError : Error {
    using Error::Error;
};

/// Thrown by exact-KL evaluation when the inverse assigns probability
/// zero to an assignment the model gives positive mass. Carries the
/// offending full assignment (one state index per variable).
struct SupportError : Error {
    std::vector<int> assignment;
    SupportError(const std::string& msg, std::vector<int> asg)
        : Error(msg), assignment(std::move(asg)) {}
};

}  // namespace nami
