#include "gauss_extremes/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/rng.hpp"

namespace gex {

std::string to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::dense_cholesky: return "dense_cholesky";
    case SamplerMethod::independent_walk: return "independent_walk";
    case SamplerMethod::random_line: return "random_line";
    case SamplerMethod::fgn_lattice: return "fgn_lattice";
    case SamplerMethod::bridge_walk: return "bridge_walk";
    case SamplerMethod::reversed_walk: return "reversed_walk";
    case SamplerMethod::stationary_circulant: return "stationary_circulant";
  }
  return "unknown";
}

std::vector<double> cholesky_with_jitter(std::span<const double> cov, std::size_t m, bool* jittered) {
  if (cov.size() != m * m) throw PreconditionError("covariance matrix size mismatch");
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> k(cov.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::MatrixXd work = k;

  if (jittered != nullptr) *jittered = false;
  Eigen::LLT<Eigen::MatrixXd> llt(work);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * std::max(work.diagonal().maxCoeff(), 1e-300);
    work.diagonal().array() += jitter;
    llt.compute(work);
    if (jittered != nullptr) *jittered = true;
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(k), Eigen::EigenvaluesOnly);
      const double min_eig = eig.eigenvalues().minCoeff();
      std::ostringstream os;
      os << "covariance is not positive definite after jitter (min eigenvalue " << min_eig << ")";
      throw NonPositiveDefinite(os.str(), min_eig);
    }
  }
  RowMatrix lower = llt.matrixL();
  return std::vector<double>(lower.data(), lower.data() + m * m);
}

namespace {

bool on_lattice(const Grid& grid, double h, long long& first) {
  const double k0 = grid.front() / h;
  first = std::llround(k0);
  return std::abs(k0 - static_cast<double>(first)) < 1e-7;
}

}  // namespace

PathSampler::PathSampler(CorrelationModel model, Grid grid, SamplerOptions options)
    : model_(std::move(model)), grid_(std::move(grid)), method_(SamplerMethod::dense_cholesky) {
  const auto pts = grid_.points();
  switch (model_.kind()) {
    case ModelKind::brownian_bridge:
      if (pts.front() < 0.0 || pts.back() > 1.0) throw PreconditionError("brownian_bridge grid must lie in [0, 1]");
      method_ = SamplerMethod::bridge_walk;
      break;
    case ModelKind::risk_time_change:
      if (pts.front() <= 0.0 || pts.back() > 1.0)
        throw PreconditionError("risk_time_change grid must lie in (0, 1]");
      method_ = SamplerMethod::reversed_walk;
      break;
    case ModelKind::fbm:
      if (model_.alpha() == 1.0) {
        method_ = SamplerMethod::independent_walk;
      } else if (model_.alpha() == 2.0) {
        method_ = SamplerMethod::random_line;
      } else if (const auto h = grid_.uniform_step(); h && on_lattice(grid_, *h, lattice_first_)) {
        lattice_lo_ = std::min<long long>(lattice_first_, 0);
        const long long last = lattice_first_ + static_cast<long long>(grid_.size()) - 1;
        const long long hi = std::max<long long>(last, 0);
        fgn_.emplace(model_.alpha(), *h, static_cast<std::size_t>(hi - lattice_lo_));
        method_ = SamplerMethod::fgn_lattice;
      }
      break;
    case ModelKind::stationary_power:
      if (const auto h = grid_.uniform_step()) {
        const double alpha = model_.alpha();
        const double a = model_.a();
        const double step = *h;
        stationary_ = CirculantSampler::create(
            [=](std::size_t k) { return std::exp(-a * std::pow(step * static_cast<double>(k), alpha)); },
            grid_.size());
        if (stationary_) method_ = SamplerMethod::stationary_circulant;
      } else if (grid_.size() == 1) {
        method_ = SamplerMethod::dense_cholesky;
      }
      break;
    case ModelKind::custom_covariance: {
      const Grid& g = *model_.custom_grid();
      if (g.size() != grid_.size()) throw PreconditionError("custom covariance grid does not match sampling grid");
      for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g[i] - grid_[i]) > 1e-12) throw PreconditionError("custom covariance grid does not match sampling grid");
      break;
    }
  }

  if (options.force_dense) method_ = SamplerMethod::dense_cholesky;
  if (method_ == SamplerMethod::dense_cholesky) {
    const auto cov = model_.kind() == ModelKind::custom_covariance ? model_.custom_matrix()
                                                                    : covariance_matrix(model_, grid_);
    factor_ = std::make_shared<const std::vector<double>>(cholesky_with_jitter(cov, grid_.size(), &jittered_));
    fgn_.reset();
    stationary_.reset();
  }
}

PathSampler::Workspace PathSampler::make_workspace() const {
  Workspace ws;
  if (method_ == SamplerMethod::dense_cholesky) ws.scratch.resize(grid_.size());
  if (fgn_) {
    ws.fgn = fgn_->make_workspace();
    ws.scratch.resize(fgn_->count());
  }
  if (stationary_) ws.circulant = stationary_->make_workspace();
  return ws;
}

void PathSampler::sample_dense(std::uint64_t seed, std::uint64_t rep, std::span<double> out, Workspace& ws) const {
  const std::size_t m = grid_.size();
  ws.scratch.resize(m);
  Engine engine = substream(seed, rep);
  NormalSource normal(engine);
  normal.fill(ws.scratch);
  const double* l = factor_->data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = l + i * m;
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * ws.scratch[j];
    out[i] = acc;
  }
}

void PathSampler::sample(std::uint64_t seed, std::uint64_t rep, std::span<double> out, Workspace& ws) const {
  const auto pts = grid_.points();
  const std::size_t m = pts.size();
  if (out.size() != m) throw PreconditionError("sample buffer length must equal grid size");

  switch (method_) {
    case SamplerMethod::dense_cholesky:
      sample_dense(seed, rep, out, ws);
      return;

    case SamplerMethod::independent_walk: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      const std::size_t first_pos = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), 0.0) - pts.begin());
      double prev_t = 0.0;
      double prev_b = 0.0;
      for (std::size_t i = first_pos; i < m; ++i) {
        prev_b += std::sqrt(pts[i] - prev_t) * normal();
        prev_t = pts[i];
        out[i] = prev_b;
      }
      prev_t = 0.0;
      prev_b = 0.0;
      for (std::size_t i = first_pos; i-- > 0;) {
        prev_b += std::sqrt(prev_t - pts[i]) * normal();
        prev_t = pts[i];
        out[i] = prev_b;
      }
      return;
    }

    case SamplerMethod::random_line: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      const double slope = normal();
      for (std::size_t i = 0; i < m; ++i) out[i] = pts[i] * slope;
      return;
    }

    case SamplerMethod::fgn_lattice: {
      if (!ws.fgn) ws.fgn = fgn_->make_workspace();
      ws.scratch.resize(fgn_->count());
      fgn_->sample(seed, rep, ws.scratch, *ws.fgn);
      // B at lattice node k, with B(0) = 0.
      const long long offset = lattice_first_ - lattice_lo_;
      double b = 0.0;
      double b_zero = 0.0;
      long long zero_pos = -lattice_lo_;
      std::size_t filled = 0;
      for (long long pos = 0; pos <= static_cast<long long>(fgn_->count()); ++pos) {
        if (pos > 0) b += ws.scratch[static_cast<std::size_t>(pos - 1)];
        if (pos == zero_pos) b_zero = b;
        if (pos >= offset && filled < m) out[filled++] = b;
      }
      for (std::size_t i = 0; i < m; ++i) out[i] -= b_zero;
      return;
    }

    case SamplerMethod::bridge_walk: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      double prev_t = 0.0;
      double b = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        b += std::sqrt(pts[i] - prev_t) * normal();
        prev_t = pts[i];
        out[i] = b;
      }
      const double b_one = prev_t < 1.0 ? b + std::sqrt(1.0 - prev_t) * normal() : b;
      for (std::size_t i = 0; i < m; ++i) out[i] -= pts[i] * b_one;
      if (pts.front() == 0.0) out[0] = 0.0;
      if (pts.back() == 1.0) out[m - 1] = 0.0;
      return;
    }

    case SamplerMethod::reversed_walk: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      const double scale = std::sqrt(model_.risk_scale());
      double prev_v = 0.0;
      double w = 0.0;
      for (std::size_t i = m; i-- > 0;) {
        const double v = 1.0 - pts[i];
        w += std::sqrt(v - prev_v) * normal();
        prev_v = v;
        out[i] = scale * w;
      }
      return;
    }

    case SamplerMethod::stationary_circulant:
      if (!ws.circulant) ws.circulant = stationary_->make_workspace();
      stationary_->sample(seed, rep, out, *ws.circulant);
      return;
  }
}

}  // namespace gex
