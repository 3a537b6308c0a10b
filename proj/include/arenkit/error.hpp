#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arenkit {

enum class Errc {
  DimensionMismatch,
  InvalidSpec,
  NonPositiveDefinite,
  NoConvergence,
  NumericalBreakdown,
  NotInfeasible,
  InvalidArgument,
  EmptySubset,
  ShapeMismatch,
  TooManyConstraints,
  CoverageGap,
  Infeasible,
  ResourceLimit,
  Parse,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::NonPositiveDefinite: return "NonPositiveDefinite";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NumericalBreakdown: return "NumericalBreakdown";
    case Errc::NotInfeasible: return "NotInfeasible";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TooManyConstraints: return "TooManyConstraints";
    case Errc::CoverageGap: return "CoverageGap";
    case Errc::Infeasible: return "Infeasible";
    case Errc::ResourceLimit: return "ResourceLimit";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace arenkit
