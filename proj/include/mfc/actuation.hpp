#pragma once

// Device input/output chain: offset-centred saturation of the control,
// multiplicative power-loss fault, and the measured output.

#include <random>

#include "mfc/ops.hpp"

namespace mfc {

template <class T>
struct Actuation {
  T v;      // saturated control, seen by the estimator
  T v_bar;  // faulted control, drives the plant
};

template <class T>
Actuation<T> apply_actuation(const T& u, double pi, double v_limit) {
  Actuation<T> out{u, T(0.0)};
  if (out.v > v_limit) {
    out.v = v_limit;
  } else if (out.v < -v_limit) {
    out.v = -v_limit;
  }
  out.v_bar = pi * out.v;
  return out;
}

/// 12-bit converter over the offset-centred span [-3.3, 3.3].
inline constexpr double kAdcSpan = 6.6;
inline constexpr double adc_lsb(int bits) { return kAdcSpan / static_cast<double>(1 << bits); }

/// Rounds to the nearest converter level and clamps to the representable
/// range [-2^(bits-1), 2^(bits-1) - 1] * lsb. `bits` = 0 is the identity.
double quantize(double y, int bits);

/// Adds zero-mean Gaussian noise (skipped when noise_std = 0, so the RNG is
/// left untouched) and quantizes.
double measure(double y_true, double noise_std, int quant_bits, std::mt19937_64& rng);

}  // namespace mfc
