#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fragnet/abm.hpp"
#include "fragnet/meanfield.hpp"
#include "fragnet/series.hpp"

namespace fragnet {

// share of live edges joining nodes of different types
double cross_edge_fraction(const NetworkState& net);

// first step at which the cross-edge share drops below eps
std::optional<int> fragmentation_time(const MetricSeries& series, double eps);

MetricSeries to_metric_series(const MeanFieldTrajectory& traj);

struct ComparisonReport {
    std::vector<double> mean_x;  // ensemble mean of x_hat per step
    std::vector<double> se_x;    // standard error of that mean
    std::vector<double> mf_x;    // deterministic counterpart
    double rmse = 0.0;           // between mean_x and mf_x over all steps
    double coverage = 0.0;       // fraction of steps with |mean - mf| <= 3 se
};

// aligns an ensemble of replica series against a deterministic trajectory;
// requires at least two replicas and matching horizons
ComparisonReport compare_to_meanfield(const std::vector<MetricSeries>& ensemble,
                                      const MetricSeries& reference);

struct SlowdownResult {
    std::optional<double> ratio;  // variant crossing time over base crossing time
    std::string status;           // "ok" or why the ratio is undefined
};

SlowdownResult slowdown_ratio(const MetricSeries& base, const MetricSeries& variant, double eps);

}  // namespace fragnet
