#include "gauss_extremes/fgn.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/rng.hpp"

namespace gex {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::uint64_t kPairLane = 0x5eedULL;

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return ComplexBuffer(p);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

struct CirculantSampler::Impl {
  std::size_t m = 0;
  std::size_t embed = 0;
  double min_eig = 0.0;
  std::vector<double> scale;  // sqrt(lambda_k / M)
  fftw_plan plan = nullptr;

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

struct CirculantWorkspace::Buffers {
  std::size_t embed = 0;
  ComplexBuffer in;
  ComplexBuffer out;
  const void* owner = nullptr;
  std::uint64_t seed = 0;
  std::uint64_t pair = std::numeric_limits<std::uint64_t>::max();
  std::vector<double> re;
  std::vector<double> im;
};

CirculantWorkspace::CirculantWorkspace() = default;
CirculantWorkspace::~CirculantWorkspace() = default;
CirculantWorkspace::CirculantWorkspace(CirculantWorkspace&&) noexcept = default;
CirculantWorkspace& CirculantWorkspace::operator=(CirculantWorkspace&&) noexcept = default;

std::optional<CirculantSampler> CirculantSampler::create(const std::function<double(std::size_t)>& autocov,
                                                         std::size_t m) {
  if (m == 0) throw PreconditionError("circulant sampler needs m >= 1");
  const std::size_t base = next_pow2(std::max<std::size_t>(m - 1, 1));
  for (std::size_t pad = 1; pad <= 4; pad *= 2) {
    const std::size_t half = base * pad;
    const std::size_t embed = 2 * half;
    auto in = alloc_complex(embed);
    auto out = alloc_complex(embed);
    for (std::size_t j = 0; j < embed; ++j) {
      const std::size_t lag = j <= half ? j : embed - j;
      in[j][0] = autocov(lag);
      in[j][1] = 0.0;
    }
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(embed), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    auto impl = std::make_shared<Impl>();
    impl->plan = plan;
    impl->m = m;
    impl->embed = embed;
    fftw_execute(plan);

    double max_eig = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < embed; ++k) {
      max_eig = std::max(max_eig, out[k][0]);
      min_eig = std::min(min_eig, out[k][0]);
    }
    impl->min_eig = min_eig;
    if (min_eig < -1e-10 * std::max(max_eig, 1e-300)) continue;

    impl->scale.resize(embed);
    const double inv = 1.0 / static_cast<double>(embed);
    for (std::size_t k = 0; k < embed; ++k) impl->scale[k] = std::sqrt(std::max(out[k][0], 0.0) * inv);
    return CirculantSampler(std::move(impl));
  }
  return std::nullopt;
}

std::size_t CirculantSampler::size() const noexcept { return impl_->m; }
std::size_t CirculantSampler::embedding_size() const noexcept { return impl_->embed; }
double CirculantSampler::min_eigenvalue() const noexcept { return impl_->min_eig; }

CirculantWorkspace CirculantSampler::make_workspace() const {
  CirculantWorkspace ws;
  ws.buffers_ = std::make_unique<CirculantWorkspace::Buffers>();
  auto& b = *ws.buffers_;
  b.embed = impl_->embed;
  b.in = alloc_complex(b.embed);
  b.out = alloc_complex(b.embed);
  b.re.resize(impl_->m);
  b.im.resize(impl_->m);
  return ws;
}

void CirculantSampler::sample(std::uint64_t seed, std::uint64_t rep, std::span<double> out,
                              CirculantWorkspace& ws) const {
  const Impl& impl = *impl_;
  if (out.size() != impl.m) throw PreconditionError("circulant sample buffer has the wrong length");
  if (!ws.buffers_ || ws.buffers_->embed != impl.embed) ws = make_workspace();
  auto& b = *ws.buffers_;
  if (b.re.size() != impl.m) {
    b.re.resize(impl.m);
    b.im.resize(impl.m);
  }

  const std::uint64_t pair = rep / 2;
  if (!(b.owner == &impl && b.seed == seed && b.pair == pair)) {
    Engine engine = substream(seed, pair, kPairLane);
    NormalSource normal(engine);
    for (std::size_t k = 0; k < impl.embed; ++k) {
      b.in[k][0] = impl.scale[k] * normal();
      b.in[k][1] = impl.scale[k] * normal();
    }
    fftw_execute_dft(impl.plan, b.in.get(), b.out.get());
    for (std::size_t i = 0; i < impl.m; ++i) {
      b.re[i] = b.out[i][0];
      b.im[i] = b.out[i][1];
    }
    b.owner = &impl;
    b.seed = seed;
    b.pair = pair;
  }
  const std::vector<double>& src = (rep % 2 == 0) ? b.re : b.im;
  std::copy(src.begin(), src.end(), out.begin());
}

FgnGenerator::FgnGenerator(double alpha, double step, std::size_t count)
    : alpha_(alpha), step_(step), count_(count) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw PreconditionError("alpha must lie in (0, 2]");
  if (!(step > 0.0)) throw PreconditionError("fGn step must be positive");
  if (alpha == 1.0) {
    method_ = FgnMethod::independent;
  } else if (alpha == 2.0) {
    method_ = FgnMethod::random_line;
  } else {
    method_ = FgnMethod::circulant;
    if (count_ > 0) {
      circulant_ = CirculantSampler::create([this](std::size_t k) { return autocovariance(k); }, count_);
      if (!circulant_) throw NonPositiveDefinite("fGn circulant embedding is not nonnegative", 0.0);
    }
  }
}

double FgnGenerator::autocovariance(std::size_t k) const {
  const double kk = static_cast<double>(k);
  const double g = 0.5 * (std::pow(kk + 1.0, alpha_) - 2.0 * std::pow(kk, alpha_) + std::pow(std::abs(kk - 1.0), alpha_));
  return g * std::pow(step_, alpha_);
}

FgnGenerator::Workspace FgnGenerator::make_workspace() const {
  Workspace ws;
  if (circulant_) ws.circulant = circulant_->make_workspace();
  return ws;
}

void FgnGenerator::sample(std::uint64_t seed, std::uint64_t rep, std::span<double> increments,
                          Workspace& ws) const {
  if (increments.size() != count_) throw PreconditionError("fGn buffer has the wrong length");
  if (count_ == 0) return;
  switch (method_) {
    case FgnMethod::independent: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      const double sd = std::sqrt(step_);
      for (double& v : increments) v = sd * normal();
      return;
    }
    case FgnMethod::random_line: {
      Engine engine = substream(seed, rep);
      NormalSource normal(engine);
      const double slope = normal();
      std::fill(increments.begin(), increments.end(), slope * step_);
      return;
    }
    case FgnMethod::circulant:
      if (!ws.circulant) ws.circulant = circulant_->make_workspace();
      circulant_->sample(seed, rep, increments, *ws.circulant);
      return;
  }
}

}  // namespace gex
