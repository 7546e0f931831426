#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgp {

enum class Errc {
  not_anti_hermitian,
  dimension_mismatch,
  invalid_params,
  chart_singularity,
  invalid_spec,
  not_closed,
  step_too_large,
  invalid_time,
  not_normalized,
  io_failure,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::not_anti_hermitian: return "NotAntiHermitian";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::chart_singularity: return "ChartSingularity";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::not_closed: return "NotClosed";
    case Errc::step_too_large: return "StepTooLarge";
    case Errc::invalid_time: return "InvalidTime";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::io_failure: return "IoFailure";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lgp
