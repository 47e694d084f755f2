#include "fdia/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdia {

MetricReport compute_metrics(const EpisodeTrace& trace) {
  if (trace.steps < 1) throw std::invalid_argument("compute_metrics: empty trace");
  MetricReport rep;
  const bool windowed = trace.attack_len > 0;
  rep.window_start = windowed ? trace.attack_start : 0;
  rep.window_len = windowed ? trace.attack_len : trace.steps;

  double sum_plan2 = 0.0, sum_ref2 = 0.0, sum_u = 0.0;
  for (long k = rep.window_start; k < rep.window_start + rep.window_len; ++k) {
    const double dplan = (trace.plan.row(k) - trace.ee.row(k)).norm();
    const double dref = (trace.ref.row(k) - trace.ee.row(k)).norm();
    rep.devmax_plan = std::max(rep.devmax_plan, dplan);
    rep.devmax_ref = std::max(rep.devmax_ref, dref);
    sum_plan2 += dplan * dplan;
    sum_ref2 += dref * dref;
    sum_u += trace.u.row(k).norm();
  }
  const double nw = static_cast<double>(rep.window_len);
  rep.devrms_plan = std::sqrt(sum_plan2 / nw);
  rep.devrms_ref = std::sqrt(sum_ref2 / nw);
  rep.mean_u_norm = sum_u / nw;

  // A diverged episode must not report a quiet pre-divergence maximum:
  // std::max drops NaN, so scan explicitly and mark the report.
  for (long k = 0; k < trace.steps && rep.finite; ++k) {
    if (!trace.ee.row(k).allFinite() || !trace.u.row(k).allFinite() ||
        !std::isfinite(trace.f(k))) {
      rep.finite = false;
      rep.first_nonfinite = k;
      const double qnan = std::numeric_limits<double>::quiet_NaN();
      rep.devmax_plan = rep.devrms_plan = qnan;
      rep.devmax_ref = rep.devrms_ref = qnan;
      rep.mean_u_norm = qnan;
    }
  }

  for (long k = 0; k < trace.steps; ++k) {
    rep.alarm_count += trace.alarm[k];
    rep.max_w = std::max(rep.max_w, trace.w(k));
    rep.min_f = std::min(rep.min_f, trace.f(k));
  }
  return rep;
}

}  // namespace fdia
