#include "probe/dispatch.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "probe/csv.hpp"
#include "probe/kernels.hpp"

namespace probe {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    const std::string s = j.dump(2) + "\n";
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_diagnostics(const fs::path& dir, const std::string& error, json details) {
    details["error"] = error;
    write_json(dir / "diagnostics.json", details);
}

int run_modes(const RunConfig& cfg, const fs::path& dir) {
    const ModesSection& s = cfg.modes;
    const Grid1D grid = make_grid(s.x_min, s.x_max, s.n_points);
    const double c = s.lapse_quadratic;
    const auto bg = c == 0.0
                        ? SpacetimeBackground::flat(grid)
                        : SpacetimeBackground::sampled(
                              grid, [c](double x) { return 1.0 + c * x * x; },
                              [](double) { return 1.0; });
    const auto pot = s.potential_type == "harmonic"
                         ? Potential::harmonic(grid, s.mass, s.frequency, s.center)
                         : Potential::double_well(grid, s.mass, s.frequency, s.x_a, s.x_b,
                                                  s.barrier);

    const auto e2 = assemble_e2(grid, bg, pot);
    const ModeBasis basis = solve_modes(e2, s.n_modes);

    // Column headers carry the eigenvalues.
    CsvTable table;
    std::vector<std::string> head = {"x"};
    for (double w2 : basis.omega_sq) head.push_back(format_double(w2));
    std::vector<double> row(1 + basis.size());
    for (int i = 0; i < grid.n_points; ++i) {
        row[0] = grid.x[i];
        for (int n = 0; n < basis.size(); ++n) row[1 + n] = basis.modes[n][i];
        table.row(row);
    }
    table.header(std::move(head));
    table.write_file((dir / "modes.csv").string());

    const Eigen::MatrixXd gram = gram_matrix(basis);
    double gram_dev = 0.0;
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = 0; j < gram.cols(); ++j)
            gram_dev = std::max(gram_dev, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));

    json summary;
    summary["omega_sq"] = basis.omega_sq;
    summary["gram_deviation"] = gram_dev;
    summary["n_points"] = grid.n_points;
    write_json(dir / "summary.json", summary);
    return kExitOk;
}

int run_influence(const RunConfig& cfg, const fs::path& dir) {
    const InfluenceSection& s = cfg.influence;
    const KernelSet kernels = KernelSet::from_omegas(s.omegas);
    const int n_modes = static_cast<int>(s.omegas.size());

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Smooth random trajectories: a few random Fourier components over the window.
    auto random_trajectory = [&]() {
        SourceTrajectory traj;
        traj.t_start = s.t_start;
        traj.t_end = s.t_end;
        traj.per_mode.resize(n_modes);
        const double span = s.t_end - s.t_start;
        for (int m = 0; m < n_modes; ++m) {
            Eigen::VectorXcd samples = Eigen::VectorXcd::Zero(s.n_samples);
            for (int h = 1; h <= 4; ++h) {
                const Complex c_re{gauss(rng), gauss(rng)};
                const Complex c_im{gauss(rng), gauss(rng)};
                for (int j = 0; j < s.n_samples; ++j) {
                    const double t = s.t_start + span * j / (s.n_samples - 1);
                    const double arg = 2.0 * 3.14159265358979323846 * h * (t - s.t_start) / span;
                    samples[j] += c_re * std::cos(arg) + c_im * std::sin(arg);
                }
            }
            traj.per_mode[m] = samples;
        }
        return traj;
    };

    CsvTable table;
    table.header({"trajectory", "re_phase", "im_phase", "term_scale", "cancellation_residual"});
    double worst_cancel = 0.0;
    for (int i = 0; i < s.n_trajectories; ++i) {
        const SourceTrajectory psi = random_trajectory();
        const SourceTrajectory psi_prime = random_trajectory();
        const InfluencePhaseValue cross = influence_phase(psi, psi_prime, kernels, s.lambda);
        const InfluencePhaseValue diag = influence_phase(psi, psi, kernels, s.lambda);
        const double cancel =
            diag.term_scale > 0.0 ? std::abs(diag.value) / diag.term_scale : 0.0;
        worst_cancel = std::max(worst_cancel, cancel);
        const double row[] = {static_cast<double>(i), cross.value.real(), cross.value.imag(),
                              cross.term_scale, cancel};
        table.row(row);
    }
    table.write_file((dir / "influence.csv").string());

    json summary;
    summary["n_trajectories"] = s.n_trajectories;
    summary["lambda"] = s.lambda;
    summary["max_cancellation_residual"] = worst_cancel;
    write_json(dir / "summary.json", summary);
    return kExitOk;
}

int run_reduce(const RunConfig& cfg, const fs::path& dir) {
    const ReductionReport report = run_reduction(cfg.reduce);

    CsvTable table;
    table.header(
        {"lambda", "dist_max", "dist_fro", "min_uncertainty_full", "min_uncertainty_udw"});
    for (const auto& row : report.rows) {
        const double vals[] = {row.lambda, row.dist_max, row.dist_fro, row.min_uncertainty_full,
                               row.min_uncertainty_udw};
        table.row(vals);
    }
    table.write_file((dir / "report.csv").string());

    double worst_uncertainty = 0.0;
    for (const auto& row : report.rows)
        worst_uncertainty = std::min({worst_uncertainty, row.min_uncertainty_full,
                                      row.min_uncertainty_udw});

    json summary;
    summary["slope"] = report.slope;
    summary["fit_residual"] = report.fit_residual;
    summary["monotone"] = report.monotone;
    summary["detector_omegas"] = report.detector_omegas;
    summary["n_lambdas"] = report.rows.size();
    summary["worst_min_uncertainty_eig"] = worst_uncertainty;
    write_json(dir / "summary.json", summary);
    return kExitOk;
}

int run_harvest(const RunConfig& cfg, const fs::path& dir) {
    const HarvestResult result = run_harvesting(cfg.harvest);

    CsvTable table;
    table.header({"", "phi_A", "pi_A", "phi_B", "pi_B"});
    const char* names[] = {"phi_A", "pi_A", "phi_B", "pi_B"};
    for (int i = 0; i < 4; ++i) {
        std::vector<std::string> row = {names[i]};
        for (int j = 0; j < 4; ++j) row.push_back(format_double(result.detector_cov(i, j)));
        table.row(row);
    }
    table.write_file((dir / "covariance.csv").string());

    json summary;
    summary["log_negativity"] = result.log_negativity;
    summary["max_overlap"] = result.max_overlap;
    summary["omega_a"] = result.omega_a;
    summary["omega_b"] = result.omega_b;
    summary["min_uncertainty_eig"] = result.final_diagnostics.min_uncertainty_eig;
    write_json(dir / "harvest.json", summary);
    return kExitOk;
}

int dispatch_single(const RunConfig& cfg, const fs::path& dir);

int run_sweep(const RunConfig& cfg, const fs::path& dir) {
    const int n_runs = static_cast<int>(cfg.sweep_runs.size());
    int threads = cfg.threads;
    if (const char* env = std::getenv("PROBE_REDUCE_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, n_runs);

    std::vector<int> codes(n_runs, -1);
    std::vector<RunConfig> subs(n_runs);
    for (int i = 0; i < n_runs; ++i) {
        subs[i] = parse_config_json(cfg.sweep_runs[i]);
        if (subs[i].seed == 0) subs[i].seed = cfg.seed;
    }

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_runs) return;
            const fs::path run_dir = dir / ("run_" + std::to_string(i));
            fs::create_directories(run_dir);
            codes[i] = dispatch_single(subs[i], run_dir);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    CsvTable table;
    table.header({"run", "command", "exit_code"});
    for (int i = 0; i < n_runs; ++i) {
        std::vector<std::string> row = {std::to_string(i), subs[i].command,
                                        std::to_string(codes[i])};
        table.row(row);
    }
    table.write_file((dir / "sweep_summary.csv").string());

    for (int c : codes)
        if (c != kExitOk) return kExitPhysicsGate;
    return kExitOk;
}

int dispatch_single(const RunConfig& cfg, const fs::path& dir) {
    try {
        if (cfg.command == "modes") return run_modes(cfg, dir);
        if (cfg.command == "influence") return run_influence(cfg, dir);
        if (cfg.command == "reduce") return run_reduce(cfg, dir);
        if (cfg.command == "harvest") return run_harvest(cfg, dir);
        if (cfg.command == "sweep") return run_sweep(cfg, dir);
        write_diagnostics(dir, "unknown command", {{"command", cfg.command}});
        return kExitConfigError;
    } catch (const NotConfining& e) {
        write_diagnostics(dir, "NotConfining", {{"detail", e.what()}});
        return kExitPhysicsGate;
    } catch (const OverlapGateFailed& e) {
        write_diagnostics(dir, "OverlapGateFailed",
                          {{"detail", e.what()}, {"max_overlap", e.max_overlap}});
        return kExitPhysicsGate;
    } catch (const UncertaintyViolated& e) {
        write_diagnostics(dir, "UncertaintyViolated", {{"detail", e.what()}});
        return kExitPhysicsGate;
    } catch (const Error& e) {
        write_diagnostics(dir, "numerical failure", {{"detail", e.what()}});
        return kExitPhysicsGate;
    }
}

}  // namespace

int dispatch(const RunConfig& cfg, const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    return dispatch_single(cfg, dir);
}

}  // namespace probe
