// Copyright 2026 The megstat Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace megstat {

enum class ErrorCode {
    DomainError,
    NoChannel,
    DegenerateChannel,
    Unreachable,
    NonNormalizable,
    DegenerateDenominator,
    NotApplicable,
    TruncationBreach,
    StepFailure,
    FrozenChain,
};

/// Machine-readable upper-snake name, e.g. "NON_NORMALIZABLE".
std::string_view error_code_name(ErrorCode code) noexcept;

/// Base for every failure raised by the library. Carries a stable code so
/// front ends can map failures without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace megstat
