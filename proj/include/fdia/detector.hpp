#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fdia {

// Windowed chi-squared residual monitor. Each step consumes one Mahalanobis
// score z >= 0; the alarm statistic is the sum over the last W scores.
struct DetectorState {
  std::vector<double> window;  // ring buffer, size W
  int head = 0;
  int count = 0;               // warm once count == W
  double w_sum = 0.0;
  double tau = 0.0;
  bool alarm_latched = false;
  int evictions = 0;           // since the last exact rebuild of w_sum

  bool warm() const { return count == static_cast<int>(window.size()); }
};

DetectorState make_detector(double tau, int W);

// z = r' Sigma^-1 r; Sigma must be PD.
double mahalanobis(const Eigen::VectorXd& r, const Eigen::MatrixXd& Sigma);

// Threshold such that a window sum of W iid chi2(p) scores exceeds it with
// probability alpha: the 1-alpha quantile of chi2(p*W).
double calibrate_threshold(double alpha, int p, int W);

struct DetectorStep {
  double w = 0.0;
  bool alarm = false;
};

// Push one score; returns the current window sum and alarm flag. The alarm
// only fires once the window is full. w_sum is rebuilt exactly every W
// evictions so float drift cannot accumulate over long runs.
DetectorStep detector_step(DetectorState& s, double z);

}  // namespace fdia
