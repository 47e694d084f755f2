#pragma once

#include "fdia/episode.hpp"

namespace fdia {

// Deviation metrics over the attack window (the whole episode when no
// attack is configured); alarms are counted over the whole episode.
struct MetricReport {
  long window_start = 0;
  long window_len = 0;
  double devmax_plan = 0.0;  // max ||planned attack position - end effector||
  double devrms_plan = 0.0;
  double devmax_ref = 0.0;   // same against the nominal hold
  double devrms_ref = 0.0;
  double mean_u_norm = 0.0;  // mean 2-norm of the applied command
  long alarm_count = 0;
  double max_w = 0.0;
  double min_f = 1.0;
  bool finite = true;       // false if the trace holds any non-finite sample
  long first_nonfinite = -1;
};

MetricReport compute_metrics(const EpisodeTrace& trace);

}  // namespace fdia
