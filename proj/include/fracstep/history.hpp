#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fracstep/cq_kernel.hpp"

namespace fracstep {

// Online evaluation of the CQ history
//
//   H^n = sum_{k=0}^{n-1} w_{n-k} x^k,      x^k in R^d,
//
// where each x^k becomes known only after H^k has been used. Every source/target
// pair (k, n) is assigned to the unique dyadic level b = 2^p at which k and n
// first fall into sibling blocks [s, s+b) and [s+b, s+2b). When a source block
// completes, its contribution to the sibling target block is one Toeplitz
// product, evaluated by FFT for large b. Total cost O(N log^2 N) per component.
class HistoryConvolver {
 public:
  HistoryConvolver(const WeightSequence& weights, std::size_t dim, std::size_t max_steps);
  ~HistoryConvolver();
  HistoryConvolver(HistoryConvolver&&) noexcept;
  HistoryConvolver& operator=(HistoryConvolver&&) noexcept;

  /// Appends x^k for k = count(); scatters every now-complete block.
  void push(std::span<const double> state);

  /// H^n for n = count(). All of its contributions are available at this point.
  std::span<const double> current() const;

  std::size_t count() const { return count_; }

 private:
  struct Level;
  void scatter_block(std::size_t start, std::size_t block);

  std::vector<double> weights_;
  std::size_t dim_;
  std::size_t max_steps_;
  std::size_t count_ = 0;
  std::vector<double> states_;  // row-major, step-major
  std::vector<double> acc_;     // accumulated H^n, step-major
  std::vector<std::unique_ptr<Level>> levels_;
};

/// Naive O(n d) oracle: sum_{k<n} w_{n-k} states[k].
std::vector<double> naive_history(const WeightSequence& weights,
                                  std::span<const std::vector<double>> states, std::size_t n);

}  // namespace fracstep
