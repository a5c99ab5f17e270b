#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace euler_plane {

enum class ErrorCode {
  // planemap
  SupportUnresolvable,
  NotDifferentiableHere,
  BadRadii,
  NotInjective,
  OverlappingSupports,
  // curve
  ResidueTooLarge,
  NonTransverseContact,
  CuspCorner,
  NoFreeDisk,
  AntipodalTangents,
  ReturnPathCrossesEndpointBall,
  WritheChanged,
  SamplingFailed,
  // cover
  PathHitsCenter,
  ForbiddenRegionViolated,
  NotARelator,
  // euler
  DegenerateEdge,
  VertexNotImmersed,
  TailNotVanished,
  OrbitMaybeNonProper,
  IdentityViolated,
  FixedPointSuspected,
  OddParity,
  NotApplicable,
  // cli
  SyntaxError,
  UnknownPrimitive,
  UndeclaredGenerator,
  BadParameter,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code drives the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace euler_plane
