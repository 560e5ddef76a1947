#include "mfc/estimator.hpp"

#include <cmath>

namespace mfc {

WindowKernel::WindowKernel(std::int64_t intervals, double dt, double alpha) : n_(intervals) {
  if (intervals < 2) throw ConfigError("window estimator needs at least 2 sample intervals");
  if (!(dt > 0.0)) throw ConfigError("window estimator needs dt > 0");
  const auto n = static_cast<std::size_t>(intervals);

  // Trapezoid weights times the kernels in window-local time s_j = j dt.
  auto weight = [n, dt](std::size_t j) { return (j == 0 || j == n) ? 0.5 * dt : dt; };
  auto y_kernel = [n, dt](std::size_t j) {
    return (static_cast<double>(n) - 2.0 * static_cast<double>(j)) * dt;
  };
  auto v_kernel = [n, dt](std::size_t j) {
    return static_cast<double>(j) * static_cast<double>(n - j) * dt * dt;
  };

  // Discrete moments replacing -tau^3/6 and tau^3/6.
  double ramp_moment = 0.0;
  double const_moment = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    ramp_moment += weight(j) * y_kernel(j) * static_cast<double>(j) * dt;
    const_moment += weight(j) * v_kernel(j);
  }

  ky_.resize((n + 1) / 2);
  kv_.resize(n / 2 + 1);
  for (std::size_t j = 0; j < ky_.size(); ++j) ky_[j] = weight(j) * y_kernel(j) / ramp_moment;
  for (std::size_t j = 0; j < kv_.size(); ++j)
    kv_[j] = alpha * weight(j) * v_kernel(j) / const_moment;
}

FEstimate<double> estimate_f_window(const SignalWindow<double>& w, double alpha, double tau,
                                    double dt) {
  const auto intervals = static_cast<std::int64_t>(w.capacity()) - 1;
  const double span = static_cast<double>(intervals) * dt;
  if (std::abs(span - tau) > 1e-6 * tau)
    throw ConfigError("window span does not match tau");
  return WindowKernel(intervals, dt, alpha).estimate(w);
}

}  // namespace mfc
