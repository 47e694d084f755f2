#pragma once

#include <Eigen/Dense>

namespace fdia {

struct PinvInfo {
  int rank = 0;
  double sigma_max = 0.0;
  double sigma_min_kept = 0.0;  // smallest retained singular value
};

// Moore-Penrose pseudoinverse via SVD. Singular values below
// rank_tol * sigma_max are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& M, double rank_tol = 1e-10,
                     PinvInfo* info = nullptr);

}  // namespace fdia
