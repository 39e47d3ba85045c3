#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "probe/errors.hpp"

namespace probe {

using Complex = std::complex<double>;

/// Per-mode two-time kernels of a traced-out oscillator of frequency omega:
///   wightman: (i/2w) e^{-i w (t - t')}
///   feynman:  (i/2w) e^{-i w |t - t'|}
Complex wightman(double omega, double t, double t_prime);
Complex feynman(double omega, double t, double t_prime);

/// Frequencies of the traced-out mode set.
struct KernelSet {
    std::vector<double> omegas;

    static KernelSet from_omegas(std::vector<double> omegas);
};

/// Complex source time series, one per traced-out mode, on a shared uniform
/// time grid over [t_start, t_end].
struct SourceTrajectory {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<Eigen::VectorXcd> per_mode;

    int n_samples() const { return per_mode.empty() ? 0 : static_cast<int>(per_mode[0].size()); }
    double dt() const { return (t_end - t_start) / (n_samples() - 1); }
};

struct InfluencePhaseValue {
    Complex value{0.0, 0.0};
    /// Sum of the absolute values of all quadrature terms; the natural scale
    /// against which cancellations are measured.
    double term_scale = 0.0;
};

/// Vacuum influence phase of the traced-out modes,
///
///   (lambda^2/2) sum_n int dt dt' [ G_n psi psi - W_n psi' psi
///                                   - G_n* psi' psi' + W_n* psi psi' ],
///
/// evaluated by double-time trapezoid quadrature. The |t-t'| kink of the
/// Feynman kernel lies on the grid diagonal; the quadrature applies the
/// analytic jump correction there so smooth sources converge at fourth order.
InfluencePhaseValue influence_phase(const SourceTrajectory& psi, const SourceTrajectory& psi_prime,
                                    const KernelSet& kernels, double lambda);

/// Truncated Wightman function of a massive field in a Dirichlet box,
/// sum_k u_k(x) u_k(x') e^{-i w_k (t-t')} / (2 w_k), box-local coordinates.
Complex field_wightman_box(double box_length, double field_mass, int k_max, double x, double t,
                           double x_prime, double t_prime);

/// Second-order excitation number of a harmonic detector of gap
/// detector_omega switched by chi and coupled to the box-field vacuum with
/// per-mode strengths g_k:
///   lambda^2 / (4 w_d) sum_k g_k^2 |chi_hat(w_d + w_k)|^2 / w_k,
/// chi_hat the Fourier transform over the window.
double udw_response(double detector_omega, std::span<const double> chi, double t_start,
                    double t_end, std::span<const double> couplings,
                    std::span<const double> field_omegas, double lambda);

}  // namespace probe
