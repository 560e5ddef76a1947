#pragma once

// Online estimation of the ultra-local term F from recent output and control
// samples.
//
// The window estimator evaluates
//
//   F(t) = -6/tau^3 * int_0^tau [ (tau - 2s) y(t - tau + s) + alpha s (tau - s) v(t - tau + s) ] ds
//
// by composite trapezoid on the sample grid. The two kernels are normalized by
// their discrete moments, so constants and ramps are reproduced to round-off
// instead of to O(dt^2).
//
// The estimators are templates over the scalar type so that the control path
// can be run with `Counted` for operation tallies.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/ops.hpp"

namespace mfc {

template <class T>
struct FEstimate {
  T value{};
  bool valid = false;
};

/// Fixed-capacity chronological buffer of (y, v) samples at uniform spacing.
template <class T>
class SignalWindow {
 public:
  explicit SignalWindow(std::int64_t capacity)
      : y_(static_cast<std::size_t>(capacity)), v_(static_cast<std::size_t>(capacity)) {
    if (capacity < 1) throw ConfigError("signal window needs a positive capacity");
  }

  void push(const T& y, const T& v) {
    y_[head_] = y;
    v_[head_] = v;
    head_ = head_ + 1 == y_.size() ? 0 : head_ + 1;
    if (fill_ < y_.size()) ++fill_;
  }

  /// Sample `j` counted from the oldest retained one.
  const T& y(std::size_t j) const { return y_[index(j)]; }
  const T& v(std::size_t j) const { return v_[index(j)]; }

  std::size_t capacity() const { return y_.size(); }
  std::size_t size() const { return fill_; }
  bool filled() const { return fill_ == y_.size(); }
  void clear() {
    fill_ = 0;
    head_ = 0;
  }

 private:
  std::size_t index(std::size_t j) const {
    // The oldest sample sits at head_ once the buffer has wrapped.
    const std::size_t start = filled() ? head_ : 0;
    const std::size_t i = start + j;
    return i >= y_.size() ? i - y_.size() : i;
  }

  std::vector<T> y_;
  std::vector<T> v_;
  std::size_t head_ = 0;
  std::size_t fill_ = 0;
};

/// Precomputed quadrature weights for a window of `intervals` sample intervals
/// (capacity intervals + 1). First-order model only.
class WindowKernel {
 public:
  WindowKernel(std::int64_t intervals, double dt, double alpha);

  std::int64_t intervals() const { return n_; }
  std::size_t capacity() const { return static_cast<std::size_t>(n_) + 1; }

  template <class T>
  FEstimate<T> estimate(const SignalWindow<T>& w) const {
    if (!w.filled() || w.capacity() != capacity()) return {T(0.0), false};
    const std::size_t n = static_cast<std::size_t>(n_);
    T acc(0.0);
    // Pairs (j, n - j) share a weight: antisymmetric for y, symmetric for v.
    for (std::size_t j = 0; 2 * j < n; ++j) {
      acc = acc + ky_[j] * (w.y(j) - w.y(n - j));
      acc = acc - kv_[j] * (w.v(j) + w.v(n - j));
    }
    if (n % 2 == 0) acc = acc - kv_[n / 2] * w.v(n / 2);
    return {acc, true};
  }

 private:
  std::int64_t n_;
  std::vector<double> ky_;  // y weights, j < n/2
  std::vector<double> kv_;  // alpha-scaled v weights, j <= n/2
};

/// Convenience form: builds the kernel for `tau` and evaluates it once.
/// Throws ConfigError when the window span differs from `tau`.
FEstimate<double> estimate_f_window(const SignalWindow<double>& w, double alpha, double tau,
                                    double dt);

/// One update of the recursive variant: the raw rate sample
/// (y_k - y_km1)/dt - alpha v_km1 through a first-order low-pass with
/// coefficient a = dt/(dt + filter_tc). Throws ConfigError when filter_tc < 0.
template <class T>
FEstimate<T> estimate_f_recursive(const FEstimate<T>& prev, const T& y_k, const T& y_km1,
                                  const T& v_km1, double alpha, double dt, double filter_tc) {
  if (filter_tc < 0.0) throw ConfigError("estimator filter time constant must be non-negative");
  const double a = dt / (dt + filter_tc);
  T raw = (y_k - y_km1) / dt - alpha * v_km1;
  T value = prev.value + a * (raw - prev.value);
  return {value, true};
}

/// Second-order model: mean over the window of the central second difference
/// of y minus alpha v. Throws ConfigError for windows under three samples.
template <class T>
FEstimate<T> estimate_f_nu2_window(const SignalWindow<T>& w, double alpha, double dt) {
  if (w.capacity() < 3) throw ConfigError("second-order window estimator needs at least 3 samples");
  if (!w.filled()) return {T(0.0), false};
  const std::size_t n = w.capacity() - 1;
  // The interior second differences telescope to the end slopes.
  T dd = (w.y(n) - w.y(n - 1)) - (w.y(1) - w.y(0));
  T vsum(0.0);
  for (std::size_t j = 1; j < n; ++j) vsum = vsum + w.v(j);
  const double inv = 1.0 / static_cast<double>(n - 1);
  T value = dd * (inv / (dt * dt)) - alpha * inv * vsum;
  return {value, true};
}

}  // namespace mfc
