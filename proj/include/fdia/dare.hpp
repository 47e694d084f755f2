#pragma once

#include <Eigen/Dense>

namespace fdia {

struct DareOptions {
  double tol = 1e-12;   // Frobenius norm of the iterate difference
  int max_iter = 100000;
};

// Fixed point of the estimation-form discrete Riccati equation
//   P = A P A' + Q - A P C' (C P C' + R)^-1 C P A'
// starting from P0 = Q. Q must be PSD and R PD; throws on dimension
// mismatch or if the cap is hit before the tolerance.
//
// The control Riccati follows by substituting (A', B', Qc, Rc).
Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const DareOptions& opt = {});

}  // namespace fdia
