#include "nashadow/errors.hpp"

namespace nashadow {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::IndexOutOfSchedule: return "IndexOutOfSchedule";
        case ErrorCode::PointOutsideSpace: return "PointOutsideSpace";
        case ErrorCode::NotExpanding: return "NotExpanding";
        case ErrorCode::PointOutsideBranchDomain: return "PointOutsideBranchDomain";
        case ErrorCode::InvalidBranchId: return "InvalidBranchId";
        case ErrorCode::NoiseExceedsSpace: return "NoiseExceedsSpace";
        case ErrorCode::DefectNotRealizable: return "DefectNotRealizable";
        case ErrorCode::NonConstantSpaces: return "NonConstantSpaces";
        case ErrorCode::ZeroHorizon: return "ZeroHorizon";
        case ErrorCode::NotCesaroNull: return "NotCesaroNull";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::MenuExhausted: return "MenuExhausted";
        case ErrorCode::DensityTooHigh: return "DensityTooHigh";
        case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
        case ErrorCode::DeltaBudgetViolated: return "DeltaBudgetViolated";
        case ErrorCode::BranchDomainViolated: return "BranchDomainViolated";
        case ErrorCode::EmptyCell: return "EmptyCell";
        case ErrorCode::NonPeriodicInput: return "NonPeriodicInput";
        case ErrorCode::SupRateNotBounded: return "SupRateNotBounded";
        case ErrorCode::NotEquicontinuousAtHorizon: return "NotEquicontinuousAtHorizon";
        case ErrorCode::PreimageSearchFailed: return "PreimageSearchFailed";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::OracleFailed: return "OracleFailed";
        case ErrorCode::OracleUnavailable: return "OracleUnavailable";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::EmptyA: return "EmptyA";
        case ErrorCode::ScheduleMismatch: return "ScheduleMismatch";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace nashadow
