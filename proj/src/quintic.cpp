#include "fdia/quintic.hpp"

#include <stdexcept>

namespace fdia {

QuinticPlan quintic_plan(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                         int T, double Ts) {
  if (p0.size() != p1.size()) {
    throw std::invalid_argument("quintic_plan: endpoint dimensions differ");
  }
  if (T < 2) {
    throw std::invalid_argument("quintic_plan: need at least two samples");
  }
  if (!(Ts > 0.0)) {
    throw std::invalid_argument("quintic_plan: Ts must be positive");
  }
  const Eigen::Index d = p0.size();
  const double duration = (T - 1) * Ts;
  const Eigen::VectorXd dp = p1 - p0;

  QuinticPlan plan;
  plan.pos.resize(T, d);
  plan.vel.resize(T, d);
  plan.acc.resize(T, d);
  for (int i = 0; i < T; ++i) {
    const double t = static_cast<double>(i) / (T - 1);
    // Factored forms keep the boundary derivatives exactly zero.
    const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    const double sd = 30.0 * t * t * (1.0 - t) * (1.0 - t);
    const double sdd = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    plan.pos.row(i) = (p0 + s * dp).transpose();
    plan.vel.row(i) = (sd / duration) * dp.transpose();
    plan.acc.row(i) = (sdd / (duration * duration)) * dp.transpose();
  }
  return plan;
}

}  // namespace fdia
