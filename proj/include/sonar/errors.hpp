#pragma once

#include <stdexcept>
#include <string>

namespace sonar {

enum class ErrorKind {
  InvalidArgument,
  Config,
  EventDelayExceedsPRI,
  AllZeroSignal,
  InsufficientSamples,
  GateExceedsMatrix,
  SampleRateMismatch,
  BadFile,
  NoDopplerPeak,
  DelayOutOfGate,
  GateMismatch,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::EventDelayExceedsPRI: return "EventDelayExceedsPRI";
    case ErrorKind::AllZeroSignal: return "AllZeroSignal";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::GateExceedsMatrix: return "GateExceedsMatrix";
    case ErrorKind::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorKind::BadFile: return "BadFile";
    case ErrorKind::NoDopplerPeak: return "NoDopplerPeak";
    case ErrorKind::DelayOutOfGate: return "DelayOutOfGate";
    case ErrorKind::GateMismatch: return "GateMismatch";
  }
  return "UnknownError";
}

/// Single exception type for the toolkit; callers branch on kind().
class SonarError : public std::runtime_error {
 public:
  SonarError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// InsufficientSamples carries how many complete pulses were available.
class InsufficientSamplesError : public SonarError {
 public:
  InsufficientSamplesError(std::size_t available, const std::string& what)
      : SonarError(ErrorKind::InsufficientSamples, what), available_(available) {}

  std::size_t available_pulses() const noexcept { return available_; }

 private:
  std::size_t available_;
};


}  // namespace sonar
