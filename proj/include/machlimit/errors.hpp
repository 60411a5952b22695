#pragma once

#include <stdexcept>
#include <string>

namespace machlimit {

struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Equation-of-state evaluated outside its admissible range (nonpositive
// pressure or density below the hyperbolicity floor).
struct EosDomainError : std::runtime_error {
  explicit EosDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegratorError : std::runtime_error {
  IntegratorError(const std::string& msg, double last_good_t)
      : std::runtime_error(msg), last_good_time(last_good_t) {}
  double last_good_time = 0.0;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Diagnostic asked for more history / samples than available.
struct ArityError : std::runtime_error {
  explicit ArityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SamplingError : std::runtime_error {
  explicit SamplingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AlignmentError : std::runtime_error {
  explicit AlignmentError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace machlimit
