#include "restart/error.hpp"

namespace restart {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroAtOrigin: return "ZeroAtOrigin";
    case ErrorCode::DegenerateAtZero: return "DegenerateAtZero";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidResetLaw: return "InvalidResetLaw";
    case ErrorCode::InvalidPeriod: return "InvalidPeriod";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::SeriesNotConverging: return "SeriesNotConverging";
    case ErrorCode::InfiniteMean: return "InfiniteMean";
    case ErrorCode::InvalidMrl: return "InvalidMrl";
    case ErrorCode::ExcessiveCensoring: return "ExcessiveCensoring";
    case ErrorCode::ExcessiveBranching: return "ExcessiveBranching";
    case ErrorCode::NoImprovement: return "NoImprovement";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace restart
