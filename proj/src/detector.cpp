#include "fdia/detector.hpp"

#include <numeric>
#include <stdexcept>

#include "fdia/gamma.hpp"

namespace fdia {

DetectorState make_detector(double tau, int W) {
  if (!(tau > 0.0)) throw std::invalid_argument("make_detector: tau must be positive");
  if (W < 1) throw std::invalid_argument("make_detector: W must be >= 1");
  DetectorState s;
  s.window.assign(W, 0.0);
  s.tau = tau;
  return s;
}

double mahalanobis(const Eigen::VectorXd& r, const Eigen::MatrixXd& Sigma) {
  if (Sigma.rows() != r.size() || Sigma.cols() != r.size()) {
    throw std::invalid_argument("mahalanobis: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("mahalanobis: Sigma must be positive definite");
  }
  // The form is nonnegative; rounding can drag eps-scale residuals below 0.
  return std::max(0.0, r.dot(llt.solve(r)));
}

double calibrate_threshold(double alpha, int p, int W) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("calibrate_threshold: alpha must lie in (0, 1)");
  }
  if (p < 1 || W < 1) {
    throw std::invalid_argument("calibrate_threshold: p and W must be >= 1");
  }
  return chi2_quantile(1.0 - alpha, static_cast<double>(p) * W);
}

DetectorStep detector_step(DetectorState& s, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("detector_step: z must be >= 0");
  const int W = static_cast<int>(s.window.size());
  if (s.count < W) {
    s.window[s.head] = z;
    s.w_sum += z;
    ++s.count;
  } else {
    s.w_sum += z - s.window[s.head];
    s.window[s.head] = z;
    if (++s.evictions >= W) {
      s.w_sum = std::accumulate(s.window.begin(), s.window.end(), 0.0);
      s.evictions = 0;
    }
  }
  s.head = (s.head + 1) % W;

  DetectorStep out;
  out.w = s.w_sum;
  // Once fired the alarm holds for the rest of the run.
  out.alarm = s.warm() && (s.alarm_latched || s.w_sum > s.tau);
  if (out.alarm) s.alarm_latched = true;
  return out;
}

}  // namespace fdia
