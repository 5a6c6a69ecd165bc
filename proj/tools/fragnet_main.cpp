#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fragnet/abm.hpp"
#include "fragnet/checks.hpp"
#include "fragnet/config_io.hpp"
#include "fragnet/csv.hpp"
#include "fragnet/meanfield.hpp"
#include "fragnet/metrics.hpp"
#include "fragnet/plot.hpp"
#include "fragnet/sweep.hpp"
#include "fragnet/version.hpp"

namespace fs = std::filesystem;
using namespace fragnet;

namespace {

std::map<std::string, std::string> load_raw(const std::string& path) {
    if (path.empty())
        return {};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str());
}

struct Overrides {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replicas = 0;
    bool replicas_set = false;
    double eps = 0.0;
    bool eps_set = false;
};

ConfigDoc make_doc(const std::string& config_path, const Overrides& ov) {
    auto raw = load_raw(config_path);
    if (ov.seed_set)
        raw["run.seed"] = std::to_string(ov.seed);
    if (ov.replicas_set)
        raw["run.replicas"] = std::to_string(ov.replicas);
    if (ov.eps_set)
        raw["run.eps"] = format_double(ov.eps);
    return build_config(raw);
}

void write_manifest(const fs::path& out_dir, const ConfigDoc& doc, int replicas,
                    const std::vector<std::string>& outputs) {
    ManifestInfo info;
    info.master_seed = doc.sim.seed;
    for (int r = 0; r < replicas; ++r)
        info.replica_seeds.push_back(derived_seed(doc.sim.seed, static_cast<std::uint64_t>(r)));
    info.outputs = outputs;
    write_text_atomic(out_dir / "manifest.txt", render_manifest(doc, info));
}

std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("none");
}

int cmd_meanfield(const std::string& config_path, const Overrides& ov, const std::string& out,
                  bool plot) {
    const ConfigDoc doc = make_doc(config_path, ov);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);

    const MeanFieldTrajectory traj =
        run_trajectory(MeanFieldParams::from(doc.sim), doc.sim.horizon);
    const ConvergenceReport report = convergence_diagnostics(traj, doc.sim.eps);

    write_text_atomic(out_dir / "meanfield.csv", meanfield_csv(traj));
    std::string diag;
    diag += "eps = " + format_double(doc.sim.eps) + "\n";
    diag += "fragmentation_step = " + opt_int(report.fragmentation_step) + "\n";
    diag += "terminal_x = " + format_double(report.terminal_x) + "\n";
    diag += "terminal_sensitivity = " + format_double(report.terminal_sensitivity) + "\n";
    diag += std::string("p_nondecreasing = ") + (report.p_nondecreasing ? "true" : "false") + "\n";
    diag += "p_direction_changes = " + std::to_string(report.p_direction_changes) + "\n";
    diag += std::string("plateau = ") + (report.plateau ? "true" : "false") + "\n";
    diag += "clamped_flows_total = " + std::to_string(traj.clamped_flows_total) + "\n";
    write_text_atomic(out_dir / "diagnostics.txt", diag);

    std::vector<std::string> outputs = {"meanfield.csv", "diagnostics.txt"};
    if (plot) {
        write_text_atomic(out_dir / "meanfield.svg",
                          render_svg({{mode_name(doc.sim.mode), to_metric_series(traj)}}));
        outputs.push_back("meanfield.svg");
    }
    write_manifest(out_dir, doc, 0, outputs);

    std::cout << "meanfield: " << doc.sim.horizon << " steps, terminal x "
              << format_double(report.terminal_x) << ", fragmentation step "
              << opt_int(report.fragmentation_step) << ", wrote " << (out_dir / "meanfield.csv").string()
              << "\n";
    return 0;
}

int cmd_abm(const std::string& config_path, const Overrides& ov, const std::string& out, bool plot,
            bool mf_reference) {
    const ConfigDoc doc = make_doc(config_path, ov);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);

    const std::vector<ReplicaResult> runs = run_abm(doc.sim);
    std::vector<MetricSeries> ensemble;
    ensemble.reserve(runs.size());
    for (const ReplicaResult& rep : runs)
        ensemble.push_back(rep.series);
    write_text_atomic(out_dir / "abm.csv", abm_csv(ensemble));

    std::string diag;
    for (const ReplicaResult& rep : runs) {
        const auto frag = fragmentation_time(rep.series, doc.sim.eps);
        diag += "replica_" + std::to_string(rep.replica) + ": seed=" + std::to_string(rep.seed) +
                " terminal_x_hat=" + format_double(rep.series.rows.back().x_hat) +
                " fragmentation_step=" + opt_int(frag) + "\n";
    }

    const bool want_reference = mf_reference || doc.sim.mf_reference;
    MeanFieldTrajectory traj;
    if (want_reference) {
        traj = run_trajectory(MeanFieldParams::from(doc.sim), doc.sim.horizon);
        const ComparisonReport cmp = compare_to_meanfield(ensemble, to_metric_series(traj));
        diag += "mf_rmse = " + format_double(cmp.rmse) + "\n";
        diag += "mf_coverage = " + format_double(cmp.coverage) + "\n";
    }
    write_text_atomic(out_dir / "diagnostics.txt", diag);

    std::vector<std::string> outputs = {"abm.csv", "diagnostics.txt"};
    if (plot) {
        std::vector<std::pair<std::string, MetricSeries>> curves;
        for (const ReplicaResult& rep : runs)
            curves.emplace_back("replica " + std::to_string(rep.replica), rep.series);
        if (want_reference)
            curves.emplace_back("meanfield", to_metric_series(traj));
        write_text_atomic(out_dir / "abm.svg", render_svg(curves));
        outputs.push_back("abm.svg");
    }
    write_manifest(out_dir, doc, doc.sim.replicas, outputs);

    std::cout << "abm: " << runs.size() << " replica(s), terminal x_hat "
              << format_double(runs.front().series.rows.back().x_hat) << ", wrote "
              << (out_dir / "abm.csv").string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov, const std::string& out,
              int workers) {
    const ConfigDoc doc = make_doc(config_path, ov);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);

    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    const SweepOutcome outcome = run_sweep(doc, workers);

    std::vector<std::string> outputs = {"summary.csv"};
    write_text_atomic(out_dir / "summary.csv", outcome.summary_csv);
    for (const SweepCellResult& cell : outcome.results) {
        for (std::size_t r = 0; r < cell.replicas.size(); ++r) {
            const std::string name = "cell_" + std::to_string(cell.index) + "_replica_" +
                                     std::to_string(r) + ".csv";
            write_text_atomic(out_dir / name, abm_csv({cell.replicas[r]}));
            outputs.push_back(name);
        }
    }
    write_manifest(out_dir, doc, doc.sweep.replicas, outputs);

    std::cout << "sweep: " << outcome.cells.size() << " cells x " << doc.sweep.replicas
              << " replicas on " << workers << " worker(s), wrote "
              << (out_dir / "summary.csv").string() << "\n";
    return 0;
}

int cmd_steady_state(double t_star, double q_star, const std::string& phi_grid,
                     const std::string& out) {
    std::vector<double> phis;
    std::stringstream ss(phi_grid);
    std::string item;
    while (std::getline(ss, item, ','))
        phis.push_back(std::stod(item));
    if (phis.empty())
        throw std::invalid_argument("steady state: empty phi grid");

    std::string csv = "phi,e_d,ratio,divergent\n";
    for (double phi : phis) {
        const SteadyStateResult r = steady_state_ed({t_star, q_star, phi});
        csv += format_double(phi) + "," + format_double(r.e_d) + "," + format_double(r.ratio) +
               "," + (r.divergent ? "true" : "false") + "\n";
        std::cout << "phi=" << format_double(phi) << " e_d=" << format_double(r.e_d)
                  << (r.divergent ? " (divergent regime)" : "") << "\n";
    }
    if (!out.empty()) {
        fs::create_directories(out);
        write_text_atomic(fs::path(out) / "steady_state.csv", csv);
    }
    return 0;
}

int cmd_check() {
    const std::vector<CheckResult> results = run_all_checks();
    bool all_ok = true;
    for (const CheckResult& r : results) {
        std::cout << (r.ok ? "[ok]   " : "[FAIL] ") << r.name;
        if (!r.detail.empty())
            std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        all_ok = all_ok && r.ok;
    }
    std::cout << (all_ok ? "all checks passed" : "checks FAILED") << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(engine_version) +
                 " - homophily network fragmentation model (deterministic recurrence + seeded "
                 "agent simulation)"};
    app.require_subcommand(1);

    std::string config_path, out = "out";
    Overrides ov;
    int workers = 0;
    bool plot = false, mf_reference = false;
    double t_star = 10.0, q_star = 0.2;
    std::string phi_grid = "0,0.5,1";

    std::vector<CLI::Option*> seed_opts, eps_opts, replica_opts;
    const auto add_common = [&](CLI::App* cmd, bool with_replicas) {
        cmd->add_option("--config", config_path, "config file (defaults apply when omitted)");
        cmd->add_option("--out", out, "output directory")->capture_default_str();
        seed_opts.push_back(cmd->add_option("--seed", ov.seed, "master seed (overrides run.seed)"));
        eps_opts.push_back(
            cmd->add_option("--eps", ov.eps, "fragmentation threshold (overrides run.eps)"));
        if (with_replicas)
            replica_opts.push_back(cmd->add_option("--replicas", ov.replicas,
                                                   "replica count (overrides run.replicas)"));
    };

    auto* mf = app.add_subcommand("meanfield", "deterministic expected-degree trajectory");
    add_common(mf, false);
    mf->add_flag("--plot", plot, "also write an SVG of x vs t");

    auto* abm = app.add_subcommand("abm", "seeded agent-based network simulation");
    add_common(abm, true);
    abm->add_flag("--plot", plot, "also write an SVG of x_hat vs t");
    abm->add_flag("--mf-reference", mf_reference,
                  "compare the replica ensemble against the deterministic trajectory");

    auto* sweep = app.add_subcommand("sweep", "deterministic parallel parameter sweep");
    add_common(sweep, false);
    sweep->add_option("--workers", workers, "worker threads (0 = hardware)")
        ->capture_default_str();

    auto* steady = app.add_subcommand("steady-state",
                                      "closed-form long-run dissimilar stock over a phi grid");
    steady->add_option("--tstar", t_star, "nominal steady-state step (> 2)")
        ->capture_default_str();
    steady->add_option("--qstar", q_star, "stationary dissimilar formation probability")
        ->capture_default_str();
    steady->add_option("--phi-grid", phi_grid, "comma list of phi values")
        ->capture_default_str();
    steady->add_option("--out", out, "also write steady_state.csv here");

    auto* check = app.add_subcommand("check", "run the full invariant suite");

    CLI11_PARSE(app, argc, argv);
    for (const CLI::Option* o : seed_opts)
        ov.seed_set = ov.seed_set || o->count() > 0;
    for (const CLI::Option* o : eps_opts)
        ov.eps_set = ov.eps_set || o->count() > 0;
    for (const CLI::Option* o : replica_opts)
        ov.replicas_set = ov.replicas_set || o->count() > 0;

    try {
        if (mf->parsed())
            return cmd_meanfield(config_path, ov, out, plot);
        if (abm->parsed())
            return cmd_abm(config_path, ov, out, plot, mf_reference);
        if (sweep->parsed())
            return cmd_sweep(config_path, ov, out, workers);
        if (steady->parsed()) {
            // --out defaults to "out" for the run commands; here emission is
            // opt-in, so only write when the flag was given
            const std::string steady_out = steady->count("--out") > 0 ? out : std::string();
            return cmd_steady_state(t_star, q_star, phi_grid, steady_out);
        }
        if (check->parsed())
            return cmd_check();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
