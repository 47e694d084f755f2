#include "fdia/noise.hpp"

#include <cmath>

namespace fdia {

double GaussianSampler::uniform01() {
  // 53-bit mantissa, shifted into (0, 1] so the log below is always finite.
  return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
}

double GaussianSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

Eigen::VectorXd GaussianSampler::normal(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

}  // namespace fdia
