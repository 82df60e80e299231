#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gex {

// Violated argument contract (bad domain, mismatched lengths, bad schedule).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense factorization failed even after the diagonal jitter retry.
class NonPositiveDefinite : public std::runtime_error {
 public:
  NonPositiveDefinite(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// A formula branch needs a constant that the injected provider cannot supply.
class ConstantUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few conditioning / exceedance events for a reportable estimate.
class InsufficientEvents : public std::runtime_error {
 public:
  InsufficientEvents(const std::string& what, std::uint64_t events)
      : std::runtime_error(what), events_(events) {}
  std::uint64_t events() const noexcept { return events_; }

 private:
  std::uint64_t events_;
};

// Interval growth did not settle within the supplied schedule.
class ScheduleExhausted : public std::runtime_error {
 public:
  struct Step {
    double horizon;
    double value;
    double stderr_;
  };

  ScheduleExhausted(const std::string& what, std::vector<Step> trajectory)
      : std::runtime_error(what), trajectory_(std::move(trajectory)) {}
  const std::vector<Step>& trajectory() const noexcept { return trajectory_; }

 private:
  std::vector<Step> trajectory_;
};

}  // namespace gex
