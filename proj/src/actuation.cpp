#include "mfc/actuation.hpp"

#include <algorithm>
#include <cmath>

namespace mfc {

double quantize(double y, int bits) {
  if (bits <= 0) return y;
  const double lsb = adc_lsb(bits);
  const double half = static_cast<double>(1 << (bits - 1));
  const double level = std::clamp(std::round(y / lsb), -half, half - 1.0);
  return level * lsb;
}

double measure(double y_true, double noise_std, int quant_bits, std::mt19937_64& rng) {
  double y = y_true;
  if (noise_std > 0.0) y += std::normal_distribution<double>(0.0, noise_std)(rng);
  return quantize(y, quant_bits);
}

}  // namespace mfc
