#pragma once

#include <Eigen/Dense>

namespace fdia {

// minimize  0.5 d' H d + g' d
// s.t.      d' O d + b' d + c <= 0
// with H, O symmetric positive definite.
struct QcqpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd O;
  Eigen::VectorXd b;
  double c = 0.0;
};

struct QcqpSolution {
  Eigen::VectorXd delta;
  double multiplier = 0.0;   // KKT multiplier, 0 when inactive
  bool active = false;
  int iterations = 0;
  double constraint_value = 0.0;  // d'Od + b'd + c at the solution
};

struct QcqpOptions {
  double ftol = 1e-13;  // relative tolerance on the active constraint value
  int max_iter = 200;
};

// Secular-equation solve: the unconstrained minimizer if feasible, otherwise
// d(l) = -(H + 2 l O)^-1 (g + l b) with l > 0 chosen so the constraint is
// active. The constraint value along l is strictly decreasing and tends to
// the interior minimum of the constraint quadratic, so a positive root
// exists whenever Slater's condition holds; throws when it does not.
QcqpSolution solve_qcqp(const QcqpProblem& prob, const QcqpOptions& opt = {});

}  // namespace fdia
