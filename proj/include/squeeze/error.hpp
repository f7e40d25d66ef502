#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace squeeze {

enum class ErrorKind {
  SingularInput,
  Domain,
  UnsupportedCurve,
  Validation,
  Topology,
  AccuracyNotReached,
  Containment,
  Inconsistency,
  Placement,
  ChartTooThin,
  DegenerateCompetitor,
  State,
  Certificate,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. `witness` holds the offending point
// (one entry per complex coordinate) when the failure has one; `value` holds
// a scalar diagnostic such as the best residual reached by a solver.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what,
        std::vector<std::complex<double>> witness = {},
        std::optional<double> value = std::nullopt)
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::complex<double>>& witness() const noexcept { return witness_; }
  std::optional<double> value() const noexcept { return value_; }

private:
  ErrorKind kind_;
  std::vector<std::complex<double>> witness_;
  std::optional<double> value_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularInput: return "singular-input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedCurve: return "unsupported-curve";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Topology: return "topology";
    case ErrorKind::AccuracyNotReached: return "accuracy-not-reached";
    case ErrorKind::Containment: return "containment";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Placement: return "placement";
    case ErrorKind::ChartTooThin: return "chart-too-thin";
    case ErrorKind::DegenerateCompetitor: return "degenerate-competitor";
    case ErrorKind::State: return "state";
    case ErrorKind::Certificate: return "certificate";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace squeeze
