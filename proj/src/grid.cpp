#include "gauss_extremes/grid.hpp"

#include <algorithm>
#include <cmath>

#include "gauss_extremes/errors.hpp"

namespace gex {

Grid::Grid(std::vector<double> points, double step) : points_(std::move(points)), step_(step) {
  if (points_.empty()) throw PreconditionError("grid needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw PreconditionError("grid points must be finite");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw PreconditionError("grid points must be strictly increasing");
  }
  if (!std::isfinite(step_) || step_ < 0.0) throw PreconditionError("grid step must be >= 0");
}

Grid Grid::uniform(double a, double b, std::size_t m) {
  if (m == 0) throw PreconditionError("uniform grid needs m >= 1");
  if (m == 1) return Grid({a}, 0.0);
  if (!(b > a)) throw PreconditionError("uniform grid needs b > a");
  const double h = (b - a) / static_cast<double>(m - 1);
  std::vector<double> pts(m);
  for (std::size_t i = 0; i < m; ++i) pts[i] = a + h * static_cast<double>(i);
  pts.back() = b;
  return Grid(std::move(pts), h);
}

Grid Grid::lattice(double a, double b, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw PreconditionError("lattice step must be positive");
  if (b < a) throw PreconditionError("lattice needs a <= b");
  const auto k_lo = static_cast<long long>(std::ceil(a / h - 1e-9));
  const auto k_hi = static_cast<long long>(std::floor(b / h + 1e-9));
  if (k_hi < k_lo) throw PreconditionError("lattice interval contains no node");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long long k = k_lo; k <= k_hi; ++k) pts.push_back(static_cast<double>(k) * h);
  return Grid(std::move(pts), h);
}

Grid Grid::geometric(double first, double last, double ratio, double max_step) {
  if (!(first > 0.0) || !(last > first) || !(ratio > 1.0) || !(max_step > 0.0))
    throw PreconditionError("geometric grid needs 0 < first < last, ratio > 1, max_step > 0");
  std::vector<double> pts{first};
  double t = first;
  while (t < last) {
    const double gap = std::min(t * (ratio - 1.0), max_step);
    t += gap;
    if (t >= last - 1e-12 * last) break;
    pts.push_back(t);
  }
  pts.push_back(last);
  return Grid(std::move(pts), max_step);
}

std::optional<double> Grid::uniform_step() const {
  if (points_.size() < 2) return std::nullopt;
  const double h = (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (std::abs((points_[i] - points_[i - 1]) - h) > 1e-9 * h) return std::nullopt;
  }
  return h;
}

Grid Grid::decimated(std::size_t factor) const {
  if (factor == 0) throw PreconditionError("decimation factor must be >= 1");
  if (factor == 1) return *this;
  std::vector<double> pts;
  for (std::size_t i = 0; i < points_.size(); i += factor) pts.push_back(points_[i]);
  return Grid(std::move(pts), step_ * static_cast<double>(factor));
}

bool Grid::contains(double t, double tol) const { return index_of(t, tol).has_value(); }

std::optional<std::size_t> Grid::index_of(double t, double tol) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), t - tol);
  if (it != points_.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - points_.begin());
  return std::nullopt;
}

}  // namespace gex
