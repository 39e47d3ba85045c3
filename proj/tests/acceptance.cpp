// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured numbers; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "probe/dispatch.hpp"
#include "probe/kernels.hpp"

using namespace probe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += "FAILED: " + what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_s,
                   const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.note(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_s) {
        out.ok = false;
        out.note("runtime " + std::to_string(elapsed) + " s exceeds budget");
    }
    if (!out.ok) ++g_failures;
    std::printf("[%s] criterion %d: %s (%s%s%.1f s)\n", out.ok ? "PASS" : "FAIL", id, name.c_str(),
                out.detail.c_str(), out.detail.empty() ? "" : ", ", elapsed);
    std::fflush(stdout);
}

// Shared artifacts across criteria.
ModeBasis g_oracle_basis;     // harmonic well, 40 modes, criteria 1/2
ReductionReport g_reduction;  // criteria 5/6
ReductionConfig g_reduction_cfg;

ReductionConfig default_reduction() {
    ReductionConfig cfg;
    cfg.probe = {-12.0, 12.0, 2001, 0.5, 1.0, 0.0};
    cfg.n_probe_modes = 24;
    cfg.detector_modes = {0};
    cfg.field_box_factor = 4.0;
    cfg.field_mass = 0.3;
    cfg.field_k_max = 64;
    cfg.smearing_amplitude = 4.0;
    cfg.smearing_width = 2.0;
    cfg.smearing_center = 0.25;
    cfg.switching = {8.0, 1.0};
    cfg.t_start = 0.0;
    cfg.t_end = 16.0;
    cfg.rk4_steps = 2400;
    cfg.lambdas = {1e-3, 2e-3, 4e-3, 8e-3};
    return cfg;
}

void criterion_1_mode_solver(Outcome& out) {
    const double m = 1.0, om = 1.0;
    const Grid1D grid = make_grid(-12.0, 12.0, 2001);
    const auto bg = SpacetimeBackground::flat(grid);
    const auto e2 = assemble_e2(grid, bg, Potential::harmonic(grid, m, om));
    g_oracle_basis = solve_modes(e2, 40);

    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
        const double exact = m * m + (2 * n + 1) * om * om;
        worst = std::max(worst, std::abs(g_oracle_basis.omega_sq[n] - exact) / exact);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst relative eigenvalue error %.2e", worst);
    out.note(buf);
    out.require(worst < 1e-6, "first 10 eigenvalues within 1e-6 relative");
}

void criterion_2_orthonormality(Outcome& out) {
    auto gram_dev = [](const ModeBasis& basis) {
        const Eigen::MatrixXd g = gram_matrix(basis);
        return (g - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff();
    };

    double worst = gram_dev(g_oracle_basis);

    const Grid1D grid = make_grid(-9.0, 9.0, 901);
    const auto curved = SpacetimeBackground::sampled(
        grid, [](double x) { return 1.0 + 0.05 * x * x; }, [](double) { return 1.0; });
    worst = std::max(
        worst, gram_dev(solve_modes(assemble_e2(grid, curved, Potential::harmonic(grid, 0.7, 1.1)), 8)));

    const Grid1D wide = make_grid(-17.0, 17.0, 1701);
    const auto flat = SpacetimeBackground::flat(wide);
    worst = std::max(worst, gram_dev(solve_modes(
                                assemble_e2(wide, flat, Potential::harmonic(wide, 0.3, 1.0, -10.0)), 3)));
    worst = std::max(worst, gram_dev(solve_modes(
                                assemble_e2(wide, flat, Potential::harmonic(wide, 0.3, 1.0, 10.0)), 3)));

    std::vector<double> bump(g_oracle_basis.grid.n_points);
    for (int i = 0; i < g_oracle_basis.grid.n_points; ++i)
        bump[i] = std::exp(-0.5 * std::pow((g_oracle_basis.grid.x[i] - 0.4) / 0.8, 2));
    bump.front() = bump.back() = 0.0;
    const double resid = resolution_residual(g_oracle_basis, bump);

    char buf[96];
    std::snprintf(buf, sizeof buf, "max gram deviation %.2e, 40-mode residual %.2e", worst, resid);
    out.note(buf);
    out.require(worst < 1e-8, "gram deviation below 1e-8 for every solved basis");
    out.require(resid < 1e-4, "gaussian bump resolved below 1e-4 by 40 modes");
}

void criterion_3_influence_phase(Outcome& out) {
    const KernelSet kernels = KernelSet::from_omegas({0.6, 1.0, 1.7, 2.9, 4.2});
    std::mt19937_64 rng(20240817);
    std::normal_distribution<double> gauss;

    auto random_traj = [&](int n_samples, double t_end) {
        SourceTrajectory traj;
        traj.t_start = 0.0;
        traj.t_end = t_end;
        traj.per_mode.resize(kernels.omegas.size());
        for (auto& series : traj.per_mode) {
            series = Eigen::VectorXcd::Zero(n_samples);
            for (int h = 1; h <= 3; ++h) {
                const Complex a{gauss(rng), gauss(rng)};
                const Complex b{gauss(rng), gauss(rng)};
                for (int j = 0; j < n_samples; ++j) {
                    const double t = t_end * j / (n_samples - 1);
                    const double arg = 2.0 * oracle::kPi * h * t / t_end;
                    series[j] += a * std::cos(arg) + b * std::sin(arg);
                }
            }
        }
        return traj;
    };

    double worst_cancel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const SourceTrajectory psi = random_traj(257, 7.0);
        const InfluencePhaseValue v = influence_phase(psi, psi, kernels, 0.05);
        worst_cancel = std::max(worst_cancel, std::abs(v.value) / v.term_scale);
    }

    const SourceTrajectory psi = random_traj(257, 7.0);
    const SourceTrajectory psi_prime = random_traj(257, 7.0);
    const Complex base = influence_phase(psi, psi_prime, kernels, 0.03).value;
    double worst_scaling = 0.0;
    for (double a : {0.5, 2.0, -1.5}) {
        SourceTrajectory ps = psi, pps = psi_prime;
        for (auto& s : ps.per_mode) s *= a;
        for (auto& s : pps.per_mode) s *= a;
        const Complex scaled = influence_phase(ps, pps, kernels, 0.03).value;
        worst_scaling =
            std::max(worst_scaling, std::abs(scaled - a * a * base) / std::abs(a * a * base));
    }

    char buf[96];
    std::snprintf(buf, sizeof buf, "cancellation %.2e of term scale, scaling deviation %.2e",
                  worst_cancel, worst_scaling);
    out.note(buf);
    out.require(worst_cancel < 1e-10, "closed-time-path diagonal cancels below 1e-10");
    out.require(worst_scaling < 1e-12, "quadratic scaling exact to 1e-12 relative");
}

void criterion_4_gaussian_engine(Outcome& out) {
    const std::vector<double> omegas = {0.5, 1.0, 2.5, 4.0};
    const SymplecticState vac = vacuum_state(omegas);
    QuadraticHamiltonian free_h;
    free_h.omegas = omegas;
    const SymplecticState still = evolve(vac, free_h, 0.0, 25.0, 800);
    const double drift = (still.cov - vac.cov).cwiseAbs().maxCoeff();
    out.require(drift < 1e-9, "zero-coupling vacuum stationary to 1e-9");

    const double c = 0.1, t_final = 3.0;
    SymplecticState displaced = vacuum_state(std::vector<double>{1.0, 1.0});
    displaced.mean << 1.0, 0.0, 0.0, 0.0;
    QuadraticHamiltonian pair;
    pair.omegas = {1.0, 1.0};
    pair.lambda = 1.0;
    pair.couplings = {{0, 1, -c}};
    const SymplecticState evolved = evolve(displaced, pair, 0.0, t_final, 600);
    const Eigen::Matrix4d prop = oracle::normal_mode_propagator(1.0, c, t_final);
    const double mean_err = (evolved.mean - prop * displaced.mean).cwiseAbs().maxCoeff();
    const double cov_err =
        (evolved.cov - prop * displaced.cov * prop.transpose()).cwiseAbs().maxCoeff();
    out.require(mean_err < 1e-6 && cov_err < 1e-6, "normal-mode oracle matched to 1e-6");

    const double t_conv = 4.0;
    QuadraticHamiltonian pair2 = pair;
    pair2.couplings = {{0, 1, -0.3}};
    const Eigen::Matrix4d prop2 = oracle::normal_mode_propagator(1.0, 0.3, t_conv);
    const Eigen::Matrix4d exact2 = prop2 * displaced.cov * prop2.transpose();
    auto err_at = [&](int steps) {
        return (evolve(displaced, pair2, 0.0, t_conv, steps).cov - exact2).cwiseAbs().maxCoeff();
    };
    const double ratio = err_at(40) / err_at(80);
    out.require(ratio >= 12.0 && ratio <= 20.0, "halving-step error ratio inside [12, 20]");

    const double min_eig = symplectic_check(evolved).min_uncertainty_eig;
    out.require(min_eig >= -1e-9, "uncertainty relation preserved to -1e-9");

    char buf[128];
    std::snprintf(buf, sizeof buf, "drift %.1e, oracle err %.1e, step ratio %.1f, min eig %.1e",
                  drift, std::max(mean_err, cov_err), ratio, min_eig);
    out.note(buf);
}

void criterion_5_reduction_scaling(Outcome& out) {
    g_reduction_cfg = default_reduction();
    g_reduction = run_reduction(g_reduction_cfg);

    char buf[128];
    std::snprintf(buf, sizeof buf, "slope %.3f, fit residual %.4f, monotone %s", g_reduction.slope,
                  g_reduction.fit_residual, g_reduction.monotone ? "yes" : "no");
    out.note(buf);
    out.require(g_reduction.slope >= 3.5, "log-log slope at least 3.5");
    out.require(g_reduction.fit_residual < 0.2, "fit residual below 0.2");
    out.require(g_reduction.monotone, "distance monotone in lambda");
    for (const auto& row : g_reduction.rows)
        out.require(row.min_uncertainty_full >= -1e-9 && row.min_uncertainty_udw >= -1e-9,
                    "evolved states pass the symplectic check");
}

void criterion_6_second_order(Outcome& out) {
    if (g_reduction.rows.empty()) {
        out.require(false, "criterion 5 must run first");
        return;
    }
    const auto& cfg = g_reduction_cfg;
    const double l0 = cfg.lambdas[0], l1 = cfg.lambdas[1];
    const Eigen::MatrixXd s0 =
        (g_reduction.udw_detector_cov[0] - g_reduction.vacuum_detector_cov) / (l0 * l0);
    const Eigen::MatrixXd s1 =
        (g_reduction.udw_detector_cov[1] - g_reduction.vacuum_detector_cov) / (l1 * l1);
    const double richardson = (s0 - s1).cwiseAbs().maxCoeff() / s0.cwiseAbs().maxCoeff();

    const double w_d = g_reduction.detector_omegas[0];
    const Eigen::MatrixXd cov = g_reduction.udw_detector_cov[0];
    const double n_implied = 0.5 * (w_d * cov(0, 0) + cov(1, 1) / w_d - 1.0);

    const int n_samples = cfg.rk4_steps + 1;
    std::vector<double> chi(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double t = cfg.t_start + (cfg.t_end - cfg.t_start) * j / (n_samples - 1);
        chi[j] = cfg.switching(t);
    }
    std::vector<double> g(g_reduction.detector_couplings.cols());
    for (size_t k = 0; k < g.size(); ++k) g[k] = g_reduction.detector_couplings(0, k);
    const double response =
        udw_response(w_d, chi, cfg.t_start, cfg.t_end, g, g_reduction.field_omegas, l0);
    const double resp_rel = std::abs(n_implied - response) / response;

    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "lambda^2 coefficient agreement %.3f%%, excitation number off by %.3f%%",
                  100.0 * richardson, 100.0 * resp_rel);
    out.note(buf);
    out.require(richardson < 0.02, "second-order coefficient consistent below 2%");
    out.require(resp_rel < 0.05, "excitation number matches the perturbative response below 5%");
}

void criterion_7_harvesting(Outcome& out) {
    HarvestConfig quiet;  // tuned defaults: wells twenty widths apart
    quiet.lambda = 0.0;
    quiet.rk4_steps = 400;
    const HarvestResult nothing = run_harvesting(quiet);
    out.require(nothing.log_negativity == 0.0, "zero coupling gives exactly zero negativity");

    const HarvestConfig cfg;
    const Grid1D grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points);
    const auto bg = SpacetimeBackground::flat(grid);
    const double ell = 1.0 / cfg.well_frequency;
    const double d = cfg.x_b - cfg.x_a;
    std::vector<double> ga(grid.n_points), gb(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        ga[i] = oracle::hermite_mode(0, cfg.well_frequency, grid.x[i] - cfg.x_a);
        gb[i] = oracle::hermite_mode(0, cfg.well_frequency, grid.x[i] - cfg.x_b);
    }
    const double overlap_quad = weighted_inner_product(ga, gb, bg, grid);
    const double overlap_analytic = std::exp(-d * d / (4.0 * ell * ell));
    const double overlap_rel = std::abs(overlap_quad - overlap_analytic) / overlap_analytic;
    out.require(overlap_rel < 0.1, "quadrature matches the analytic gaussian overlap within 10%");
    out.require(overlap_analytic < 1e-6, "analytic overlap itself clears the gate threshold");

    const HarvestResult result = run_harvesting(cfg);
    out.require(result.max_overlap < 1e-6, "solved-basis overlap gate below 1e-6");

    const Eigen::Matrix4d pert_cov = oracle::harvest_perturbative_cov(
        result.omega_a, result.couplings_a, result.couplings_b, result.field_omegas,
        [&](double t) { return cfg.switching(t); }, cfg.t_start, cfg.t_end, cfg.lambda, 64);
    SymplecticState pert;
    pert.labels = {"a", "b"};
    pert.mean = Eigen::VectorXd::Zero(4);
    pert.cov = pert_cov;
    const std::vector<int> party = {0};
    const double en_oracle = log_negativity(pert, party);
    const double en_rel = std::abs(result.log_negativity - en_oracle) / en_oracle;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "E_N %.3e vs oracle %.3e (%.2f%%), basis overlap %.1e, analytic overlap off %.1e",
                  result.log_negativity, en_oracle, 100.0 * en_rel, result.max_overlap,
                  overlap_rel);
    out.note(buf);
    out.require(en_oracle > 0.0, "perturbative oracle predicts nonzero harvesting");
    out.require(en_rel < 0.1, "negativity matches the perturbative oracle within 10%");
}

void criterion_8_negativity_oracle(Outcome& out) {
    SymplecticState st;
    st.labels = {"a", "b"};
    st.mean = Eigen::VectorXd::Zero(4);
    st.cov = oracle::two_mode_squeezed_cov(0.5);
    const std::vector<int> party = {0};
    const double en = log_negativity(st, party);
    char buf[64];
    std::snprintf(buf, sizeof buf, "E_N(r=0.5) = %.12f", en);
    out.note(buf);
    out.require(std::abs(en - 1.0) < 1e-8, "two-mode squeezed negativity equals 1.0 to 1e-8");
}

void criterion_9_determinism(Outcome& out) {
    nlohmann::json j = {
        {"command", "reduce"},
        {"seed", 42},
        {"reduce",
         {{"probe",
           {{"x_min", -8.0}, {"x_max", 8.0}, {"n_points", 801}, {"mass", 0.5}, {"frequency", 1.0}}},
          {"n_probe_modes", 6},
          {"detector_modes", {0}},
          {"field", {{"box_factor", 4.0}, {"mass", 0.3}, {"k_max", 16}}},
          {"smearing", {{"amplitude", 3.0}, {"width", 1.5}, {"center", 0.2}}},
          {"switching", {{"center", 4.0}, {"width", 0.8}}},
          {"time", {{"t_start", 0.0}, {"t_end", 8.0}, {"rk4_steps", 700}}},
          {"lambdas", {0.002, 0.004, 0.008}}}},
    };
    const RunConfig cfg = parse_config_json(j);

    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };

    const fs::path base = fs::temp_directory_path() / "probe_acceptance_det";
    fs::remove_all(base);
    const fs::path dir_a = base / "a", dir_b = base / "b";
    out.require(dispatch(cfg, dir_a.string()) == kExitOk, "first dispatch succeeds");
    out.require(dispatch(cfg, dir_b.string()) == kExitOk, "second dispatch succeeds");

    const bool csv_same = slurp(dir_a / "report.csv") == slurp(dir_b / "report.csv");
    const bool json_same = slurp(dir_a / "summary.json") == slurp(dir_b / "summary.json");
    out.require(csv_same, "report.csv byte-identical across runs");
    out.require(json_same, "summary.json byte-identical across runs");
    out.note(csv_same && json_same ? "outputs byte-identical" : "outputs differ");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "mode solver vs analytic oracle", 5.0, criterion_1_mode_solver);
    run_criterion(2, "orthonormality and mode-quadrature pairing", 5.0, criterion_2_orthonormality);
    run_criterion(3, "influence-phase cancellation and scaling", 10.0, criterion_3_influence_phase);
    run_criterion(4, "gaussian engine oracles", 30.0, criterion_4_gaussian_engine);
    run_criterion(5, "detector reduction scaling", 600.0, criterion_5_reduction_scaling);
    run_criterion(6, "second-order consistency", 30.0, criterion_6_second_order);
    run_criterion(7, "entanglement harvesting", 600.0, criterion_7_harvesting);
    run_criterion(8, "negativity unit oracle", 1.0, criterion_8_negativity_oracle);
    run_criterion(9, "deterministic outputs", 120.0, criterion_9_determinism);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
