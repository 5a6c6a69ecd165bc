#include "fragnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fragnet {

double cross_edge_fraction(const NetworkState& net) {
    const std::int64_t total = net.n_similar + net.n_dissimilar;
    if (total == 0)
        throw std::domain_error("cross_edge_fraction: network holds no edges");
    return static_cast<double>(net.n_dissimilar) / static_cast<double>(total);
}

std::optional<int> fragmentation_time(const MetricSeries& series, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("fragmentation_time: eps must lie in (0,1)");
    for (const auto& row : series.rows)
        if (row.x_hat < eps)  // NaN compares false, empty-network rows never trigger
            return row.t;
    return std::nullopt;
}

MetricSeries to_metric_series(const MeanFieldTrajectory& traj) {
    MetricSeries series;
    series.provenance = "meanfield";
    series.rows.reserve(traj.rows.size());
    for (const auto& row : traj.rows) {
        MetricRow out;
        out.t = row.t;
        out.x_hat = row.x;
        out.mean_degree = row.e_s + row.e_d;
        out.n_similar = row.e_s;
        out.n_dissimilar = row.e_d;
        series.rows.push_back(out);
    }
    return series;
}

ComparisonReport compare_to_meanfield(const std::vector<MetricSeries>& ensemble,
                                      const MetricSeries& reference) {
    if (ensemble.size() < 2)
        throw std::invalid_argument("compare_to_meanfield: need at least two replicas");
    const std::size_t steps = reference.rows.size();
    for (const auto& series : ensemble)
        if (series.rows.size() != steps)
            throw std::invalid_argument("compare_to_meanfield: horizon mismatch");

    ComparisonReport report;
    report.mean_x.resize(steps);
    report.se_x.resize(steps);
    report.mf_x.resize(steps);
    const auto reps = static_cast<double>(ensemble.size());
    double sq_sum = 0.0;
    std::size_t covered = 0;
    std::size_t counted = 0;
    std::vector<double> values(ensemble.size());
    for (std::size_t t = 0; t < steps; ++t) {
        bool defined = true;
        for (std::size_t r = 0; r < ensemble.size(); ++r) {
            values[r] = ensemble[r].rows[t].x_hat;
            defined = defined && !std::isnan(values[r]);
        }
        report.mf_x[t] = reference.rows[t].x_hat;
        if (!defined) {  // empty network in some replica; leave the step out
            report.mean_x[t] = std::numeric_limits<double>::quiet_NaN();
            report.se_x[t] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        // accumulate in sorted order so the report does not depend on how
        // the caller happened to arrange the replicas; summing offsets from
        // the smallest value keeps an all-equal ensemble exactly at that value
        std::sort(values.begin(), values.end());
        double shift = 0.0;
        for (double v : values)
            shift += v - values.front();
        const double mean = values.front() + shift / reps;
        double var = 0.0;
        for (double v : values) {
            const double d = v - mean;
            var += d * d;
        }
        var /= reps - 1.0;
        report.mean_x[t] = mean;
        report.se_x[t] = std::sqrt(var / reps);
        const double diff = mean - report.mf_x[t];
        sq_sum += diff * diff;
        ++counted;
        if (std::abs(diff) <= 3.0 * report.se_x[t])
            ++covered;
    }
    if (counted == 0)
        throw std::invalid_argument("compare_to_meanfield: every step has an empty network");
    report.rmse = std::sqrt(sq_sum / static_cast<double>(counted));
    report.coverage = static_cast<double>(covered) / static_cast<double>(counted);
    return report;
}

SlowdownResult slowdown_ratio(const MetricSeries& base, const MetricSeries& variant, double eps) {
    const auto t_base = fragmentation_time(base, eps);
    const auto t_variant = fragmentation_time(variant, eps);
    SlowdownResult result;
    if (!t_base || !t_variant) {
        result.status = "no slowdown measurable: ";
        result.status += !t_base ? "base series never crosses eps" : "variant series never crosses eps";
        return result;
    }
    if (*t_base == 0) {
        result.status = "no slowdown measurable: base crosses at t=0";
        return result;
    }
    result.ratio = static_cast<double>(*t_variant) / static_cast<double>(*t_base);
    result.status = "ok";
    return result;
}

}  // namespace fragnet
