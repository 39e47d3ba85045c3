#include "probe/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace probe {

namespace {

std::vector<double> sample_gaussian_sigma(const Grid1D& grid, double amplitude, double center,
                                          double width) {
    std::vector<double> sigma(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double u = (grid.x[i] - center) / width;
        sigma[i] = amplitude * std::exp(-0.5 * u * u);
    }
    return sigma;
}

}  // namespace

void ReductionConfig::validate() const {
    if (n_probe_modes < 1) throw ShapeMismatch("reduction: n_probe_modes must be positive");
    if (detector_modes.empty()) throw ShapeMismatch("reduction: detector subset A is empty");
    for (int a : detector_modes)
        if (a < 0 || a >= n_probe_modes)
            throw ShapeMismatch("reduction: detector subset A not within the solved probe modes");
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] < 0.0) throw ShapeMismatch("reduction: lambdas must be non-negative");
        if (i > 0 && lambdas[i] <= lambdas[i - 1])
            throw ShapeMismatch("reduction: lambdas must be ascending");
    }
    if (field_box_factor < 1.0)
        throw ShapeMismatch("reduction: field box must enclose the probe grid");
}

ReductionReport run_reduction(const ReductionConfig& cfg) {
    cfg.validate();

    const Grid1D grid = make_grid(cfg.probe.x_min, cfg.probe.x_max, cfg.probe.n_points);
    const auto bg = SpacetimeBackground::flat(grid);
    const auto pot = Potential::harmonic(grid, cfg.probe.mass, cfg.probe.frequency,
                                         cfg.probe.center);
    const auto e2 = assemble_e2(grid, bg, pot);
    const ModeBasis basis = solve_modes(e2, cfg.n_probe_modes);

    const FieldBox box =
        FieldBox::enclosing(grid, cfg.field_box_factor, cfg.field_mass, cfg.field_k_max);
    const auto sigma =
        sample_gaussian_sigma(grid, cfg.smearing_amplitude, cfg.smearing_center,
                              cfg.smearing_width);
    const CouplingMatrix g = project_smearing(sigma, basis, box);
    const std::vector<double> field_omegas = box.omegas();

    const int n_probe = cfg.n_probe_modes;
    const int n_field = cfg.field_k_max;
    const int n_a = static_cast<int>(cfg.detector_modes.size());

    // Full system: every probe mode plus the field, probe modes first.
    QuadraticHamiltonian h_full;
    h_full.lambda = 1.0;  // per-run lambda set below
    h_full.switching = cfg.switching;
    std::vector<std::string> labels_full;
    for (int n = 0; n < n_probe; ++n) {
        h_full.omegas.push_back(basis.omega(n));
        labels_full.push_back("probe" + std::to_string(n));
    }
    for (int k = 0; k < n_field; ++k) {
        h_full.omegas.push_back(field_omegas[k]);
        labels_full.push_back("field" + std::to_string(k + 1));
    }
    for (int n = 0; n < n_probe; ++n)
        for (int k = 0; k < n_field; ++k)
            h_full.couplings.push_back({n, n_probe + k, g(n, k)});

    // Detector-only system: the modes in A plus the same field, with
    // bit-identical coupling rows.
    QuadraticHamiltonian h_udw;
    h_udw.lambda = 1.0;
    h_udw.switching = cfg.switching;
    std::vector<std::string> labels_udw;
    for (int a = 0; a < n_a; ++a) {
        h_udw.omegas.push_back(basis.omega(cfg.detector_modes[a]));
        labels_udw.push_back(labels_full[cfg.detector_modes[a]]);
    }
    for (int k = 0; k < n_field; ++k) {
        h_udw.omegas.push_back(field_omegas[k]);
        labels_udw.push_back(labels_full[n_probe + k]);
    }
    for (int a = 0; a < n_a; ++a)
        for (int k = 0; k < n_field; ++k)
            h_udw.couplings.push_back({a, n_a + k, g(cfg.detector_modes[a], k)});

    const SymplecticState vac_full = vacuum_state(h_full.omegas, labels_full);
    const SymplecticState vac_udw = vacuum_state(h_udw.omegas, labels_udw);

    std::vector<int> keep_full(cfg.detector_modes.begin(), cfg.detector_modes.end());
    std::vector<int> keep_udw(n_a);
    for (int a = 0; a < n_a; ++a) keep_udw[a] = a;

    ReductionReport report;
    for (int a = 0; a < n_a; ++a) {
        report.detector_omegas.push_back(basis.omega(cfg.detector_modes[a]));
    }
    report.detector_couplings.resize(n_a, n_field);
    for (int a = 0; a < n_a; ++a) report.detector_couplings.row(a) = g.row(cfg.detector_modes[a]);
    report.field_omegas = field_omegas;
    report.vacuum_detector_cov = partial_trace(vac_full, keep_full).cov;

    for (double lambda : cfg.lambdas) {
        h_full.lambda = lambda;
        h_udw.lambda = lambda;

        const SymplecticState full_out =
            evolve(vac_full, h_full, cfg.t_start, cfg.t_end, cfg.rk4_steps);
        const SymplecticState udw_out =
            evolve(vac_udw, h_udw, cfg.t_start, cfg.t_end, cfg.rk4_steps);

        const SymplecticState full_a = partial_trace(full_out, keep_full);
        const SymplecticState udw_a = partial_trace(udw_out, keep_udw);
        const Eigen::MatrixXd diff = full_a.cov - udw_a.cov;

        ReductionRow row;
        row.lambda = lambda;
        row.dist_max = diff.cwiseAbs().maxCoeff();
        row.dist_fro = diff.norm();
        row.min_uncertainty_full = symplectic_check(full_out).min_uncertainty_eig;
        row.min_uncertainty_udw = symplectic_check(udw_out).min_uncertainty_eig;
        report.rows.push_back(row);
        report.full_detector_cov.push_back(full_a.cov);
        report.udw_detector_cov.push_back(udw_a.cov);
    }

    std::vector<double> fit_lambdas, fit_dists;
    for (const auto& row : report.rows) {
        if (row.lambda > 0.0) {
            fit_lambdas.push_back(row.lambda);
            fit_dists.push_back(row.dist_fro);
        }
    }
    const FitResult fit = fit_scaling(fit_dists, fit_lambdas);
    report.slope = fit.slope;
    report.fit_residual = fit.max_residual;

    report.monotone = true;
    for (size_t i = 1; i < report.rows.size(); ++i) {
        if (report.rows[i].dist_fro <= report.rows[i - 1].dist_fro ||
            report.rows[i].dist_max <= report.rows[i - 1].dist_max)
            report.monotone = false;
    }
    return report;
}

FitResult fit_scaling(std::span<const double> distances, std::span<const double> lambdas) {
    if (distances.size() != lambdas.size())
        throw ShapeMismatch("fit_scaling: distances and lambdas differ in length");

    std::vector<double> xs, ys;
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] > 0.0 && distances[i] > 0.0) {
            xs.push_back(std::log(lambdas[i]));
            ys.push_back(std::log(distances[i]));
        }
    }
    if (xs.size() < 3)
        throw DegenerateFit("fit_scaling: need at least three strictly positive pairs");

    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DegenerateFit("fit_scaling: lambdas are all equal");

    FitResult fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    for (size_t i = 0; i < xs.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ys[i] - (intercept + fit.slope * xs[i])));
    return fit;
}

void HarvestConfig::validate() const {
    if (!(x_a < x_b)) throw ShapeMismatch("harvest: requires x_a < x_b");
    if (overlap_check_modes < 1) throw ShapeMismatch("harvest: overlap_check_modes must be >= 1");
    if (lambda < 0.0) throw ShapeMismatch("harvest: lambda must be non-negative");
    if (field_box_factor < 1.0)
        throw ShapeMismatch("harvest: field box must enclose the probe grid");
}

HarvestResult run_harvesting(const HarvestConfig& cfg) {
    cfg.validate();

    const Grid1D grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points);
    const auto bg = SpacetimeBackground::flat(grid);

    // The joint double well must itself be confining.
    const auto joint = Potential::double_well(grid, cfg.well_mass, cfg.well_frequency, cfg.x_a,
                                              cfg.x_b, cfg.barrier);
    if (!passes_confinement_gate(joint, grid))
        throw NotConfining("harvest: joint double-well potential fails the confinement gate");

    // Region bases from each well's own confining potential.
    const auto pot_a = Potential::harmonic(grid, cfg.well_mass, cfg.well_frequency, cfg.x_a);
    const auto pot_b = Potential::harmonic(grid, cfg.well_mass, cfg.well_frequency, cfg.x_b);
    const int k_solve = std::max(1, cfg.overlap_check_modes);
    const ModeBasis basis_a = solve_modes(assemble_e2(grid, bg, pot_a), k_solve);
    const ModeBasis basis_b = solve_modes(assemble_e2(grid, bg, pot_b), k_solve);

    const Eigen::MatrixXd overlap = mode_overlap(basis_a, basis_b);
    const double max_overlap = overlap.cwiseAbs().maxCoeff();
    if (max_overlap >= cfg.overlap_threshold)
        throw OverlapGateFailed("harvest: region mode overlap " + std::to_string(max_overlap) +
                                    " exceeds threshold " + std::to_string(cfg.overlap_threshold),
                                max_overlap);

    const FieldBox box =
        FieldBox::enclosing(grid, cfg.field_box_factor, cfg.field_mass, cfg.field_k_max);
    const std::vector<double> sigma(grid.n_points, cfg.smearing_amplitude);
    const CouplingMatrix g_a = project_smearing(sigma, basis_a, box);
    const CouplingMatrix g_b = project_smearing(sigma, basis_b, box);

    HarvestResult result;
    result.max_overlap = max_overlap;
    result.omega_a = basis_a.omega(0);
    result.omega_b = basis_b.omega(0);
    result.couplings_a = g_a.row(0);
    result.couplings_b = g_b.row(0);
    result.field_omegas = box.omegas();

    QuadraticHamiltonian h;
    h.lambda = cfg.lambda;
    h.switching = cfg.switching;
    std::vector<std::string> labels = {"detA", "detB"};
    h.omegas = {result.omega_a, result.omega_b};
    for (int k = 0; k < cfg.field_k_max; ++k) {
        h.omegas.push_back(result.field_omegas[k]);
        labels.push_back("field" + std::to_string(k + 1));
    }
    for (int k = 0; k < cfg.field_k_max; ++k) {
        h.couplings.push_back({0, 2 + k, result.couplings_a[k]});
        h.couplings.push_back({1, 2 + k, result.couplings_b[k]});
    }

    const SymplecticState vac = vacuum_state(h.omegas, labels);
    const SymplecticState evolved = evolve(vac, h, cfg.t_start, cfg.t_end, cfg.rk4_steps);
    const std::vector<int> keep = {0, 1};
    const SymplecticState detectors = partial_trace(evolved, keep);

    result.detector_cov = detectors.cov;
    const std::vector<int> party_a = {0};
    result.log_negativity = log_negativity(detectors, party_a);
    result.final_diagnostics = symplectic_check(evolved);
    return result;
}

ProperFrameRecord lapse_rescale(double omega_killing, double lapse_at_x) {
    if (!(lapse_at_x > 0.0)) throw NonPositiveLapse("lapse_rescale: lapse must be positive");
    ProperFrameRecord rec;
    rec.proper_omega = omega_killing / lapse_at_x;
    rec.dtau_dt = lapse_at_x;
    rec.amplitude_factor = std::sqrt(lapse_at_x);
    return rec;
}

OscillatorCoefficients reparametrize_to_proper_time(double omega_killing, double lapse) {
    if (!(lapse > 0.0)) throw NonPositiveLapse("reparametrize_to_proper_time: lapse must be positive");
    // S = 1/2 int dt (phidot^2 - w^2 phi^2) with t = tau/N:
    // dt = dtau/N and d/dt = N d/dtau.
    OscillatorCoefficients c;
    c.kinetic = lapse;
    c.potential = omega_killing * omega_killing / lapse;
    return c;
}

OscillatorCoefficients rescale_amplitude(const OscillatorCoefficients& c, double lapse) {
    if (!(lapse > 0.0)) throw NonPositiveLapse("rescale_amplitude: lapse must be positive");
    // phi = phitilde / sqrt(N) scales both coefficients by 1/N.
    return {c.kinetic / lapse, c.potential / lapse};
}

}  // namespace probe
