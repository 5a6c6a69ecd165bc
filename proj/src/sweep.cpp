#include "fragnet/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fragnet/abm.hpp"
#include "fragnet/csv.hpp"
#include "fragnet/meanfield.hpp"
#include "fragnet/metrics.hpp"

namespace fragnet {

namespace {

template <typename T>
std::vector<T> or_single(const std::vector<T>& swept, T base) {
    return swept.empty() ? std::vector<T>{base} : swept;
}

}  // namespace

std::vector<SweepCell> expand_sweep(const ConfigDoc& doc) {
    if (!doc.has_sweep)
        throw std::invalid_argument("sweep: config has no sweep.* lists");
    const SimConfig& base = doc.sim;
    const bool weibull = base.kernels.similar().family() == KernelFamily::weibull;

    const auto alphas = or_single(doc.sweep.alpha, base.f.param());
    const auto lam_ds = or_single(doc.sweep.lambda_d, base.kernels.dissimilar().lambda());
    const auto lam_bs = or_single(doc.sweep.lambda_b, base.kernels.biased().lambda());
    const auto lam_ss = or_single(doc.sweep.lambda_s, base.kernels.similar().lambda());
    const auto gammas = or_single(doc.sweep.gamma, base.kernels.similar().gamma());
    const auto phis = or_single(doc.sweep.phi, base.phi);
    const auto modes = or_single(doc.sweep.mode, base.mode);
    const auto ns = or_single(doc.sweep.n, base.n);
    const auto horizons = or_single(doc.sweep.horizon, base.horizon);

    std::vector<SweepCell> cells;
    cells.reserve(doc.sweep.cell_count());
    for (double alpha : alphas)
    for (double lam_d : lam_ds)
    for (double lam_b : lam_bs)
    for (double lam_s : lam_ss)
    for (double gamma : gammas)
    for (double phi : phis)
    for (Mode mode : modes)
    for (int n : ns)
    for (int horizon : horizons) {
        SweepCell cell;
        cell.index = static_cast<int>(cells.size());
        cell.cfg = base;
        try {
            if (!doc.sweep.alpha.empty())
                cell.cfg.f = HomophilyFunction::power(alpha);
            if (weibull)
                cell.cfg.kernels = KernelTriple::weibull(lam_d, lam_b, lam_s, gamma);
            cell.cfg.phi = phi;
            cell.cfg.mode = mode;
            cell.cfg.n = n;
            cell.cfg.horizon = horizon;
            cell.cfg.replicas = doc.sweep.replicas;
            cell.cfg.validate();
        } catch (const std::invalid_argument& ex) {
            throw std::invalid_argument("sweep cell " + std::to_string(cell.index) + ": " +
                                        ex.what());
        }
        const auto show = [&cell](const char* name, std::string value) {
            cell.params.emplace_back(name, std::move(value));
        };
        if (!doc.sweep.alpha.empty()) show("alpha", format_double(alpha));
        if (!doc.sweep.lambda_d.empty()) show("lambda_d", format_double(lam_d));
        if (!doc.sweep.lambda_b.empty()) show("lambda_b", format_double(lam_b));
        if (!doc.sweep.lambda_s.empty()) show("lambda_s", format_double(lam_s));
        if (!doc.sweep.gamma.empty()) show("gamma", format_double(gamma));
        if (!doc.sweep.phi.empty()) show("phi", format_double(phi));
        if (!doc.sweep.mode.empty()) show("mode", mode_name(mode));
        if (!doc.sweep.n.empty()) show("n", std::to_string(n));
        if (!doc.sweep.horizon.empty()) show("horizon", std::to_string(horizon));
        cells.push_back(std::move(cell));
    }
    return cells;
}

SweepOutcome run_sweep(const ConfigDoc& doc, int workers) {
    SweepOutcome outcome;
    outcome.cells = expand_sweep(doc);
    const int reps = doc.sweep.replicas;
    const std::size_t total = outcome.cells.size() * static_cast<std::size_t>(reps);

    outcome.results.resize(outcome.cells.size());
    for (std::size_t c = 0; c < outcome.cells.size(); ++c) {
        outcome.results[c].index = outcome.cells[c].index;
        outcome.results[c].replicas.resize(static_cast<std::size_t>(reps));
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    const auto worker = [&]() {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
            if (task >= total)
                return;
            const std::size_t c = task / static_cast<std::size_t>(reps);
            const int r = static_cast<int>(task % static_cast<std::size_t>(reps));
            try {
                ReplicaResult res = run_abm_replica(outcome.cells[c].cfg, r);
                outcome.results[c].replicas[static_cast<std::size_t>(r)] = std::move(res.series);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    const int pool = std::max(1, workers);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int w = 0; w < pool; ++w)
        threads.emplace_back(worker);
    for (auto& th : threads)
        th.join();
    if (error)
        std::rethrow_exception(error);

    // deterministic aggregation pass, sequential by cell index
    std::string param_header;
    for (const auto& [name, value] : outcome.cells.front().params) {
        (void)value;
        param_header += ',';
        param_header += name;
    }
    outcome.summary_csv = "cell" + param_header + ",frag_time,terminal_x,slowdown_ratio\n";
    for (std::size_t c = 0; c < outcome.cells.size(); ++c) {
        const SweepCell& cell = outcome.cells[c];
        SweepCellResult& result = outcome.results[c];

        MetricSeries mean;
        mean.provenance = "ensemble-mean";
        const std::size_t steps = result.replicas.front().rows.size();
        mean.rows.resize(steps);
        for (std::size_t t = 0; t < steps; ++t) {
            MetricRow& row = mean.rows[t];
            row = result.replicas.front().rows[t];
            for (std::size_t r = 1; r < result.replicas.size(); ++r) {
                const MetricRow& other = result.replicas[r].rows[t];
                row.x_hat += other.x_hat;
                row.mean_degree += other.mean_degree;
                row.n_similar += other.n_similar;
                row.n_dissimilar += other.n_dissimilar;
                row.skipped += other.skipped;
                row.rewired += other.rewired;
            }
            const auto k = static_cast<double>(result.replicas.size());
            row.x_hat /= k;
            row.mean_degree /= k;
            row.n_similar /= k;
            row.n_dissimilar /= k;
        }
        result.ensemble_mean = std::move(mean);
        result.frag_time = fragmentation_time(result.ensemble_mean, cell.cfg.eps);
        result.terminal_x = result.ensemble_mean.rows.back().x_hat;

        SimConfig base_cfg = cell.cfg;
        base_cfg.mode = Mode::base;
        const auto base_traj =
            run_trajectory(MeanFieldParams::from(base_cfg), cell.cfg.horizon);
        const auto cell_traj =
            run_trajectory(MeanFieldParams::from(cell.cfg), cell.cfg.horizon);
        const SlowdownResult slow = slowdown_ratio(to_metric_series(base_traj),
                                                   to_metric_series(cell_traj), cell.cfg.eps);
        result.slowdown = slow.ratio;
        result.slowdown_status = slow.status;

        outcome.summary_csv += std::to_string(cell.index);
        for (const auto& [name, value] : cell.params) {
            (void)name;
            outcome.summary_csv += ',';
            outcome.summary_csv += value;
        }
        outcome.summary_csv += ',';
        outcome.summary_csv += result.frag_time ? std::to_string(*result.frag_time) : "none";
        outcome.summary_csv += ',';
        outcome.summary_csv += format_double(result.terminal_x);
        outcome.summary_csv += ',';
        outcome.summary_csv += result.slowdown ? format_double(*result.slowdown) : "none";
        outcome.summary_csv += '\n';
    }
    return outcome;
}

}  // namespace fragnet
