#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "euler_plane/scene.hpp"
#include "euler_plane/svg.hpp"

namespace euler_plane::cli {

enum ExitCode { kOk = 0, kIoFailure = 1, kParseError = 2, kNumericalFailure = 3, kIdentityViolation = 4 };

int exit_code_for(ErrorCode code);
/// What to try next, e.g. "increase N". Empty when there is nothing useful to say.
std::string remediation_hint(ErrorCode code);

struct RunSettings {
  std::optional<std::string> method;  // overrides the scene's method name
  std::optional<std::uint64_t> seed;  // overrides the scene's seed
  bool figure = false;                // fill ReportDocument::figure
  std::ostream* log = nullptr;        // progress lines (--verbose)
};

struct ReportDocument {
  nlohmann::json body;     // deterministic for equal scenes and seeds
  nlohmann::json timings;  // wall clock, kept out of the body
  SvgFigure figure;
  int exit_code = kOk;

  /// {"body": ..., "timings": ...}, keys sorted, two-space indent.
  std::string text() const;
};

/// Runs the requested method(s); `all` runs every applicable one and checks agreement.
/// Method failures are recorded in the document, not thrown.
ReportDocument run_scene(const SceneFile& scene, const RunSettings& settings = {});

}  // namespace euler_plane::cli
