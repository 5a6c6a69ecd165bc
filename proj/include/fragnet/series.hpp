#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fragnet {

/// One observation row of a run. Counts are stored as doubles so the same
/// row type carries agent counts (integral values) and expected-value stocks
/// (fractional); x_hat is NaN when the edge set is empty.
struct MetricRow {
    int t = 0;
    double x_hat = 0.0;
    double mean_degree = 0.0;
    double n_similar = 0.0;
    double n_dissimilar = 0.0;
    std::int64_t skipped = 0;
    std::int64_t rewired = 0;
};

struct MetricSeries {
    std::string provenance;  // "abm" or "meanfield"
    int replica = -1;        // -1 for deterministic sources
    std::vector<MetricRow> rows;
};

}  // namespace fragnet
