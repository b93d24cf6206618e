#include "fracstep/history.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <string>

#include "fracstep/compensated_sum.hpp"

namespace fracstep {

namespace {

// Blocks at or below this size are scattered directly.
constexpr std::size_t kDirectBlock = 32;

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct HistoryConvolver::Level {
  std::size_t block = 0;
  std::size_t length = 0;  // FFT length, 2 * block
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  std::vector<std::complex<double>> kernel_spectrum;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Level(std::size_t b, std::span<const double> weights) : block(b), length(2 * b) {
    const std::size_t n_spec = length / 2 + 1;
    real_buf = fftw_alloc_real(length);
    spec_buf = fftw_alloc_complex(n_spec);
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(length), real_buf, spec_buf, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(length), spec_buf, real_buf, FFTW_ESTIMATE);
    }
    // Kernel c_d = w_{d+1} for lags d = 0 .. 2b-2.
    std::fill(real_buf, real_buf + length, 0.0);
    for (std::size_t d = 0; d + 1 < length; ++d) {
      real_buf[d] = (d + 1 < weights.size()) ? weights[d + 1] : 0.0;
    }
    fftw_execute(forward);
    kernel_spectrum.resize(n_spec);
    const double inv = 1.0 / static_cast<double>(length);
    for (std::size_t i = 0; i < n_spec; ++i) {
      kernel_spectrum[i] = std::complex<double>(spec_buf[i][0], spec_buf[i][1]) * inv;
    }
  }

  ~Level() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real_buf);
    fftw_free(spec_buf);
  }

  Level(const Level&) = delete;
  Level& operator=(const Level&) = delete;
};

HistoryConvolver::HistoryConvolver(const WeightSequence& weights, std::size_t dim,
                                   std::size_t max_steps)
    : weights_(weights.values().begin(), weights.values().end()),
      dim_(dim),
      max_steps_(max_steps),
      states_(max_steps * dim, 0.0),
      acc_((max_steps + 1) * dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("HistoryConvolver: dimension must be positive");
  if (weights_.size() < max_steps + 1) {
    throw std::invalid_argument("HistoryConvolver: need " + std::to_string(max_steps + 1) +
                                " weights, got " + std::to_string(weights_.size()));
  }
}

HistoryConvolver::~HistoryConvolver() = default;
HistoryConvolver::HistoryConvolver(HistoryConvolver&&) noexcept = default;
HistoryConvolver& HistoryConvolver::operator=(HistoryConvolver&&) noexcept = default;

void HistoryConvolver::push(std::span<const double> state) {
  if (state.size() != dim_) throw std::invalid_argument("HistoryConvolver::push: wrong dimension");
  if (count_ >= max_steps_) throw std::out_of_range("HistoryConvolver::push: capacity exhausted");
  std::copy(state.begin(), state.end(), states_.begin() + static_cast<std::ptrdiff_t>(count_ * dim_));
  ++count_;
  // Source block [count - b, count) is a left sibling iff count / b is odd.
  for (std::size_t b = 1; b <= count_; b *= 2) {
    if (count_ % b != 0) break;
    if ((count_ / b) % 2 == 1) scatter_block(count_ - b, b);
  }
}

std::span<const double> HistoryConvolver::current() const {
  if (count_ > max_steps_) throw std::out_of_range("HistoryConvolver::current");
  return {acc_.data() + count_ * dim_, dim_};
}

void HistoryConvolver::scatter_block(std::size_t start, std::size_t block) {
  const std::size_t first_target = start + block;
  if (first_target > max_steps_) return;
  const std::size_t n_targets = std::min(block, max_steps_ + 1 - first_target);

  if (block <= kDirectBlock) {
    for (std::size_t m = 0; m < n_targets; ++m) {
      const std::size_t n = first_target + m;
      double* out = acc_.data() + n * dim_;
      for (std::size_t i = 0; i < block; ++i) {
        const double w = weights_[n - (start + i)];
        const double* x = states_.data() + (start + i) * dim_;
        for (std::size_t c = 0; c < dim_; ++c) out[c] += w * x[c];
      }
    }
    return;
  }

  std::size_t p = 0;
  while ((std::size_t{1} << p) < block) ++p;
  if (levels_.size() <= p) levels_.resize(p + 1);
  if (!levels_[p]) levels_[p] = std::make_unique<Level>(block, weights_);
  Level& level = *levels_[p];

  const std::size_t n_spec = level.length / 2 + 1;
  for (std::size_t c = 0; c < dim_; ++c) {
    std::fill(level.real_buf, level.real_buf + level.length, 0.0);
    for (std::size_t i = 0; i < block; ++i) level.real_buf[i] = states_[(start + i) * dim_ + c];
    fftw_execute(level.forward);
    for (std::size_t i = 0; i < n_spec; ++i) {
      const std::complex<double> v =
          std::complex<double>(level.spec_buf[i][0], level.spec_buf[i][1]) * level.kernel_spectrum[i];
      level.spec_buf[i][0] = v.real();
      level.spec_buf[i][1] = v.imag();
    }
    fftw_execute(level.backward);
    // Linear convolution index block-1+m holds target first_target + m; the
    // cyclic wrap of length 2b only reaches indices below block-1.
    for (std::size_t m = 0; m < n_targets; ++m) {
      acc_[(first_target + m) * dim_ + c] += level.real_buf[block - 1 + m];
    }
  }
}

std::vector<double> naive_history(const WeightSequence& weights,
                                  std::span<const std::vector<double>> states, std::size_t n) {
  if (n > states.size() || n >= weights.size()) {
    throw std::out_of_range("naive_history: index " + std::to_string(n) + " out of range");
  }
  if (n == 0) return std::vector<double>(states.empty() ? 0 : states[0].size(), 0.0);
  const std::size_t dim = states[0].size();
  std::vector<double> out(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    CompensatedSum<double> acc;
    for (std::size_t k = 0; k < n; ++k) acc.add(weights[n - k] * states[k][c]);
    out[c] = acc.value();
  }
  return out;
}

}  // namespace fracstep
