#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdia/episode.hpp"
#include "fdia/metrics.hpp"

namespace fdia {

// Shortest-roundtrip decimal formatting: reading the file back reproduces
// every double bit for bit. The first line carries the episode metadata,
// the second the column header.
void write_trace_csv(const EpisodeTrace& trace, const std::string& path);
EpisodeTrace read_trace_csv(const std::string& path);

void write_metrics_csv(
    const std::vector<std::pair<std::string, MetricReport>>& rows,
    const std::string& path);

}  // namespace fdia
