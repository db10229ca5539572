#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nashadow {

enum class ErrorCode {
    IndexOutOfSchedule,
    PointOutsideSpace,
    NotExpanding,
    PointOutsideBranchDomain,
    InvalidBranchId,
    NoiseExceedsSpace,
    DefectNotRealizable,
    NonConstantSpaces,
    ZeroHorizon,
    NotCesaroNull,
    BoundViolated,
    MenuExhausted,
    DensityTooHigh,
    EpsilonTooLarge,
    DeltaBudgetViolated,
    BranchDomainViolated,
    EmptyCell,
    NonPeriodicInput,
    SupRateNotBounded,
    NotEquicontinuousAtHorizon,
    PreimageSearchFailed,
    NoConvergence,
    OracleFailed,
    OracleUnavailable,
    HypothesisViolated,
    EmptyA,
    ScheduleMismatch,
    BudgetExceeded,
    ConfigInvalid,
    InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every library failure is reported through this exception type; `code()`
// identifies the failure and the message carries the witness, if any.
class ShadowError : public std::runtime_error {
public:
    ShadowError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw ShadowError(code, what);
}

}  // namespace nashadow
