#include "fdia/qcqp.hpp"

#include <cmath>
#include <stdexcept>

namespace fdia {
namespace {

double constraint_at(const QcqpProblem& p, const Eigen::VectorXd& d) {
  return d.dot(p.O * d) + p.b.dot(d) + p.c;
}

double constraint_scale(const QcqpProblem& p, const Eigen::VectorXd& d) {
  return std::max(1.0, std::abs(d.dot(p.O * d)) + std::abs(p.b.dot(d)) + std::abs(p.c));
}

}  // namespace

QcqpSolution solve_qcqp(const QcqpProblem& prob, const QcqpOptions& opt) {
  const Eigen::Index m = prob.H.rows();
  if (prob.H.cols() != m || prob.O.rows() != m || prob.O.cols() != m ||
      prob.g.size() != m || prob.b.size() != m) {
    throw std::invalid_argument("solve_qcqp: inconsistent dimensions");
  }
  Eigen::LLT<Eigen::MatrixXd> hchol(prob.H);
  if (hchol.info() != Eigen::Success) {
    throw std::invalid_argument("solve_qcqp: H must be positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> ochol(prob.O);
  if (ochol.info() != Eigen::Success) {
    throw std::invalid_argument("solve_qcqp: O must be positive definite");
  }

  QcqpSolution sol;
  sol.delta = -hchol.solve(prob.g);
  sol.constraint_value = constraint_at(prob, sol.delta);
  if (sol.constraint_value <= opt.ftol * constraint_scale(prob, sol.delta)) {
    return sol;
  }

  // Interior minimum of the constraint quadratic; Slater requires it negative.
  const double qmin = prob.c - 0.25 * prob.b.dot(ochol.solve(prob.b));
  if (!(qmin < 0.0)) {
    throw std::runtime_error("solve_qcqp: constraint set has empty interior");
  }

  const auto eval = [&](double lam, Eigen::VectorXd& d, double& phi, double& dphi) {
    Eigen::LLT<Eigen::MatrixXd> mchol(prob.H + 2.0 * lam * prob.O);
    if (mchol.info() != Eigen::Success) {
      throw std::runtime_error("solve_qcqp: shifted system not PD");
    }
    d = -mchol.solve(prob.g + lam * prob.b);
    phi = constraint_at(prob, d);
    const Eigen::VectorXd w = 2.0 * prob.O * d + prob.b;
    dphi = -w.dot(mchol.solve(w));
  };

  // Bracket the root: phi(0) > 0 and phi -> qmin < 0 as lam grows.
  double lo = 0.0;
  double hi = std::max(1.0, prob.H.trace() / prob.O.trace());
  Eigen::VectorXd d;
  double phi, dphi;
  for (int i = 0; i < 200; ++i) {
    eval(hi, d, phi, dphi);
    if (phi < 0.0) break;
    lo = hi;
    hi *= 4.0;
    if (i == 199) throw std::runtime_error("solve_qcqp: root bracketing failed");
  }

  double lam = 0.5 * (lo + hi);
  for (int it = 1; it <= opt.max_iter; ++it) {
    eval(lam, d, phi, dphi);
    sol.iterations = it;
    if (std::abs(phi) <= opt.ftol * constraint_scale(prob, d)) break;
    if (phi > 0.0) {
      lo = lam;
    } else {
      hi = lam;
    }
    double next = (dphi < 0.0) ? lam - phi / dphi : lam;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lam) break;
    lam = next;
  }
  sol.delta = d;
  sol.multiplier = lam;
  sol.active = true;
  sol.constraint_value = phi;
  return sol;
}

}  // namespace fdia
