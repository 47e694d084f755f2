#include "fdia/pinv.hpp"

#include <stdexcept>

namespace fdia {

Eigen::MatrixXd pinv(const Eigen::MatrixXd& M, double rank_tol, PinvInfo* info) {
  if (!(rank_tol >= 0.0)) {
    throw std::invalid_argument("pinv: rank_tol must be non-negative");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = rank_tol * smax;

  Eigen::VectorXd sinv = Eigen::VectorXd::Zero(s.size());
  int rank = 0;
  double smin_kept = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) {
      sinv(i) = 1.0 / s(i);
      smin_kept = s(i);
      ++rank;
    }
  }
  if (info) {
    info->rank = rank;
    info->sigma_max = smax;
    info->sigma_min_kept = smin_kept;
  }
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace fdia
