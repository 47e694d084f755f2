#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace fdia {

// Seeded N(0,1) stream: mt19937_64 driving a Box-Muller pair transform.
// Hand-rolled on purpose; std::normal_distribution is not reproducible
// across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double normal();
  Eigen::VectorXd normal(Eigen::Index n);

 private:
  double uniform01();  // in (0, 1]

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdia
