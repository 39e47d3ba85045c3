#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "probe/gaussian.hpp"
#include "probe/geometry.hpp"
#include "probe/modes.hpp"

namespace probe {

struct GaussianPulse {
    double center = 0.0;
    double width = 1.0;

    double operator()(double t) const {
        const double u = (t - center) / width;
        return std::exp(-0.5 * u * u);
    }
};

/// Harmonic confining well defining the probe field.
struct ProbeWell {
    double x_min = -12.0;
    double x_max = 12.0;
    int n_points = 2001;
    double mass = 0.5;
    double frequency = 1.0;  // well curvature Omega
    double center = 0.0;
};

struct ReductionConfig {
    ProbeWell probe;
    int n_probe_modes = 24;
    std::vector<int> detector_modes = {0};  // kept subset A

    double field_box_factor = 4.0;
    double field_mass = 0.3;
    int field_k_max = 64;

    double smearing_amplitude = 4.0;
    double smearing_width = 2.0;
    double smearing_center = 0.25;
    GaussianPulse switching{8.0, 1.0};

    double t_start = 0.0;
    double t_end = 16.0;
    int rk4_steps = 2400;

    std::vector<double> lambdas = {1e-3, 2e-3, 4e-3, 8e-3};

    void validate() const;  // throws on structural violations
};

struct ReductionRow {
    double lambda = 0.0;
    double dist_max = 0.0;
    double dist_fro = 0.0;
    double min_uncertainty_full = 0.0;
    double min_uncertainty_udw = 0.0;
};

struct ReductionReport {
    std::vector<ReductionRow> rows;
    double slope = 0.0;
    double fit_residual = 0.0;
    bool monotone = false;

    std::vector<double> detector_omegas;            // omega of modes in A
    Eigen::MatrixXd detector_couplings;             // |A| x k_field rows of g
    std::vector<double> field_omegas;
    Eigen::MatrixXd vacuum_detector_cov;            // 2|A| x 2|A|
    std::vector<Eigen::MatrixXd> udw_detector_cov;  // per lambda
    std::vector<Eigen::MatrixXd> full_detector_cov; // per lambda
};

ReductionReport run_reduction(const ReductionConfig& cfg);

struct FitResult {
    double slope = 0.0;
    double max_residual = 0.0;
};

/// Least-squares slope of log(distance) against log(lambda).
FitResult fit_scaling(std::span<const double> distances, std::span<const double> lambdas);

struct HarvestConfig {
    double x_min = -17.0;
    double x_max = 17.0;
    int n_points = 1701;

    double well_mass = 0.3;
    double well_frequency = 1.0;
    double x_a = -10.0;
    double x_b = 10.0;
    double barrier = 1.0;

    double overlap_threshold = 1e-6;
    int overlap_check_modes = 3;

    double field_box_factor = 4.0;
    double field_mass = 0.1;
    int field_k_max = 96;

    double smearing_amplitude = 4.0;  // constant sigma(x)
    GaussianPulse switching{10.0, 3.0};

    double t_start = 0.0;
    double t_end = 20.0;
    int rk4_steps = 2600;

    double lambda = 1e-2;

    void validate() const;
};

struct HarvestResult {
    double log_negativity = 0.0;
    Eigen::MatrixXd detector_cov;  // 4x4 two-mode covariance
    double max_overlap = 0.0;
    double omega_a = 0.0;
    double omega_b = 0.0;
    Eigen::VectorXd couplings_a;  // per field mode
    Eigen::VectorXd couplings_b;
    std::vector<double> field_omegas;
    SymplecticDiagnostics final_diagnostics;
};

HarvestResult run_harvesting(const HarvestConfig& cfg);

/// Proper-frame data of a static detector sitting at lapse N:
/// proper gap Omega = omega/N, dtau/dt = N, amplitude factor sqrt(N).
struct ProperFrameRecord {
    double proper_omega = 0.0;
    double dtau_dt = 0.0;
    double amplitude_factor = 0.0;
};

ProperFrameRecord lapse_rescale(double omega_killing, double lapse_at_x);

/// Quadratic-action coefficients L = (kinetic (dphi/ds)^2 - potential phi^2)/2
/// tracked through the reparametrization t -> tau = N t and the amplitude
/// rescaling phi -> phi/sqrt(N); ends at the unit-mass oscillator form.
struct OscillatorCoefficients {
    double kinetic = 1.0;
    double potential = 0.0;
};

OscillatorCoefficients reparametrize_to_proper_time(double omega_killing, double lapse);
OscillatorCoefficients rescale_amplitude(const OscillatorCoefficients& c, double lapse);

}  // namespace probe
