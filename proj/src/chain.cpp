#include "fdia/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace fdia {

PlanarChain make_chain(const Eigen::VectorXd& lengths) {
  if (lengths.size() == 0) {
    throw std::invalid_argument("make_chain: at least one link required");
  }
  if ((lengths.array() <= 0.0).any()) {
    throw std::invalid_argument("make_chain: link lengths must be positive");
  }
  return PlanarChain{lengths};
}

namespace {

void check_q(const PlanarChain& chain, const Eigen::VectorXd& q) {
  if (q.size() != chain.lengths.size()) {
    throw std::invalid_argument("chain: joint vector size mismatch");
  }
}

}  // namespace

Pose fk(const PlanarChain& chain, const Eigen::VectorXd& q) {
  check_q(chain, q);
  double x = 0.0, y = 0.0, th = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    th += q(i);
    x += chain.lengths(i) * std::cos(th);
    y += chain.lengths(i) * std::sin(th);
  }
  Pose pose;
  pose.position = Eigen::Vector3d(x, y, 0.0);
  // Planar rotation written out keeps the z row and column exact.
  const double c = std::cos(th), s = std::sin(th);
  pose.rotation << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return pose;
}

Eigen::MatrixXd jacobian(const PlanarChain& chain, const Eigen::VectorXd& q) {
  check_q(chain, q);
  const Eigen::Index p = q.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, p);
  // Column j accumulates the links distal to joint j.
  double th = 0.0;
  Eigen::VectorXd sx(p), sy(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    th += q(i);
    sx(i) = -chain.lengths(i) * std::sin(th);
    sy(i) = chain.lengths(i) * std::cos(th);
  }
  double ax = 0.0, ay = 0.0;
  for (Eigen::Index j = p - 1; j >= 0; --j) {
    ax += sx(j);
    ay += sy(j);
    J(0, j) = ax;
    J(1, j) = ay;
    J(2, j) = 1.0;
  }
  return J;
}

Eigen::MatrixXd jacobian_dot(const PlanarChain& chain, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qdot) {
  check_q(chain, q);
  check_q(chain, qdot);
  const Eigen::Index p = q.size();
  Eigen::MatrixXd Jd = Eigen::MatrixXd::Zero(3, p);
  double th = 0.0, thd = 0.0;
  Eigen::VectorXd dx(p), dy(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    th += q(i);
    thd += qdot(i);
    dx(i) = -chain.lengths(i) * std::cos(th) * thd;
    dy(i) = -chain.lengths(i) * std::sin(th) * thd;
  }
  double ax = 0.0, ay = 0.0;
  for (Eigen::Index j = p - 1; j >= 0; --j) {
    ax += dx(j);
    ay += dy(j);
    Jd(0, j) = ax;
    Jd(1, j) = ay;
  }
  return Jd;
}

Eigen::Vector3d orientation_error(const Eigen::Matrix3d& R_ref,
                                  const Eigen::Matrix3d& R_est) {
  const Eigen::Matrix3d R = R_ref * R_est.transpose();
  const Eigen::Vector3d a(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const double cos_th = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  const double sin_th = 0.5 * a.norm();
  const double theta = std::atan2(sin_th, cos_th);

  if (theta < M_PI - 1e-6) {
    // sin(theta/2) * axis = a / (4 cos(theta/2)); exact for theta < pi and
    // smooth through theta = 0.
    return a / (4.0 * std::cos(0.5 * theta));
  }
  // Near pi the vee part vanishes; recover the axis from R = 2 n n' - I.
  int j = 0;
  R.diagonal().maxCoeff(&j);
  Eigen::Vector3d n;
  n(j) = std::sqrt(std::max(0.0, 0.5 * (R(j, j) + 1.0)));
  for (int i = 0; i < 3; ++i) {
    if (i != j) n(i) = 0.25 * (R(i, j) + R(j, i)) / n(j);
  }
  int imax = 0;
  n.cwiseAbs().maxCoeff(&imax);
  if (n(imax) < 0.0) n = -n;
  return std::sin(0.5 * theta) * n;
}

}  // namespace fdia
