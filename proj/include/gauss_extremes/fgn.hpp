#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>

namespace gex {

class CirculantWorkspace;

// Exact sampler for a stationary Gaussian sequence Y_0..Y_{m-1} by
// circulant embedding. One FFT yields two independent sequences (real and
// imaginary parts); replications 2p and 2p+1 share the normals of pair p,
// and a workspace reuses the second half when asked for 2p+1 right after 2p.
class CirculantSampler {
 public:
  // nullopt when no embedding up to 4x padding is nonnegative definite.
  static std::optional<CirculantSampler> create(const std::function<double(std::size_t)>& autocov,
                                                std::size_t m);

  std::size_t size() const noexcept;
  std::size_t embedding_size() const noexcept;
  double min_eigenvalue() const noexcept;

  void sample(std::uint64_t seed, std::uint64_t rep, std::span<double> out, CirculantWorkspace& ws) const;

  CirculantWorkspace make_workspace() const;

 private:
  struct Impl;
  explicit CirculantSampler(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

class CirculantWorkspace {
 public:
  CirculantWorkspace();
  ~CirculantWorkspace();
  CirculantWorkspace(CirculantWorkspace&&) noexcept;
  CirculantWorkspace& operator=(CirculantWorkspace&&) noexcept;

 private:
  friend class CirculantSampler;
  struct Buffers;
  std::unique_ptr<Buffers> buffers_;
};

enum class FgnMethod { independent, random_line, circulant };

// Increments B(k h + h) - B(k h), k = 0..count-1, of a standard fBm with
// Hurst index alpha/2. alpha = 1 gives i.i.d. increments and alpha = 2 the
// random line B(t) = t N; everything else goes through CirculantSampler.
class FgnGenerator {
 public:
  FgnGenerator(double alpha, double step, std::size_t count);

  FgnMethod method() const noexcept { return method_; }
  std::size_t count() const noexcept { return count_; }
  double step() const noexcept { return step_; }
  double alpha() const noexcept { return alpha_; }

  struct Workspace {
    std::optional<CirculantWorkspace> circulant;
  };
  Workspace make_workspace() const;

  void sample(std::uint64_t seed, std::uint64_t rep, std::span<double> increments, Workspace& ws) const;

  // Autocovariance of the increment sequence at lag k.
  double autocovariance(std::size_t k) const;

 private:
  double alpha_;
  double step_;
  std::size_t count_;
  FgnMethod method_;
  std::optional<CirculantSampler> circulant_;
};

}  // namespace gex
