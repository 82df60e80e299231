#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gex {

// Strictly increasing, finite time points. `step` is the nominal spacing
// and is informational only; uniform grids also remember their lattice.
class Grid {
 public:
  explicit Grid(std::vector<double> points, double step = 0.0);

  // m points a, a + h, ..., b with h = (b - a) / (m - 1); m == 1 gives {a}.
  static Grid uniform(double a, double b, std::size_t m);

  // Points k*h for integer k with a <= k*h <= b (snapped to the lattice).
  static Grid lattice(double a, double b, double h);

  // Geometric spacing from `first` with ratio `ratio` until the gap would
  // exceed `max_step`, then uniform steps of `max_step` up to `last`.
  static Grid geometric(double first, double last, double ratio, double max_step);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double step() const noexcept { return step_; }

  // Spacing when the points are equally spaced (relative tolerance 1e-9).
  std::optional<double> uniform_step() const;

  // Every `factor`-th point starting at index 0, plus the last point when
  // it is on the decimated lattice. Used for nested-grid estimation.
  Grid decimated(std::size_t factor) const;

  bool contains(double t, double tol = 1e-12) const;
  std::optional<std::size_t> index_of(double t, double tol = 1e-9) const;

 private:
  std::vector<double> points_;
  double step_;
};

}  // namespace gex
