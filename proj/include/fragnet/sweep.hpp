#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragnet/config_io.hpp"
#include "fragnet/series.hpp"

namespace fragnet {

/// One point of the Cartesian grid. params holds the swept dimensions only,
/// in the fixed expansion order, rendered as text for the summary row.
struct SweepCell {
    int index = 0;
    SimConfig cfg;
    std::vector<std::pair<std::string, std::string>> params;
};

/// Row-major expansion over (alpha, lambda_d, lambda_b, lambda_s, gamma,
/// phi, mode, n, horizon); unswept dimensions inherit the base config.
/// Throws if the config has no sweep lists or a cell is invalid.
std::vector<SweepCell> expand_sweep(const ConfigDoc& doc);

struct SweepCellResult {
    int index = 0;
    std::vector<MetricSeries> replicas;
    MetricSeries ensemble_mean;
    std::optional<int> frag_time;      // ensemble-mean series crossing eps
    double terminal_x = 0.0;           // ensemble-mean x_hat at the horizon
    std::optional<double> slowdown;    // mean-field cell mode vs base mode
    std::string slowdown_status;
};

struct SweepOutcome {
    std::vector<SweepCell> cells;
    std::vector<SweepCellResult> results;
    std::string summary_csv;
};

/// Runs every (cell, replica) task on a pool of `workers` threads. Results
/// are aggregated by index, so outputs are byte-identical for any worker
/// count.
SweepOutcome run_sweep(const ConfigDoc& doc, int workers);

}  // namespace fragnet
