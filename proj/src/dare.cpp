#include "fdia/dare.hpp"

#include <stdexcept>

namespace fdia {

Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const DareOptions& opt) {
  const Eigen::Index n = A.rows();
  const Eigen::Index p = C.rows();
  if (A.cols() != n || C.cols() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != p || R.cols() != p) {
    throw std::invalid_argument("solve_dare: inconsistent dimensions");
  }
  if (!Q.isApprox(Q.transpose(), 1e-10) || !R.isApprox(R.transpose(), 1e-10)) {
    throw std::invalid_argument("solve_dare: Q and R must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> rchol(R);
  if (rchol.info() != Eigen::Success) {
    throw std::invalid_argument("solve_dare: R must be positive definite");
  }

  Eigen::MatrixXd P = Q;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Eigen::MatrixXd S = C * P * C.transpose() + R;
    Eigen::LLT<Eigen::MatrixXd> schol(S);
    if (schol.info() != Eigen::Success) {
      throw std::runtime_error("solve_dare: innovation covariance not PD");
    }
    const Eigen::MatrixXd APCt = A * P * C.transpose();
    Eigen::MatrixXd Pn =
        A * P * A.transpose() + Q -
        APCt * schol.solve(APCt.transpose());
    Pn = 0.5 * (Pn + Pn.transpose()).eval();
    const double delta = (Pn - P).norm();
    P = Pn;
    if (delta < opt.tol) return P;
  }
  throw std::runtime_error("solve_dare: no convergence within iteration cap");
}

}  // namespace fdia
