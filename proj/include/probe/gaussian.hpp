#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "probe/errors.hpp"

namespace probe {

/// Gaussian state over an ordered list of modes, quadratures interleaved as
/// (phi_1, pi_1, ..., phi_M, pi_M). Conventions: hbar = 1, vacuum covariance
/// of a unit oscillator is I/2.
struct SymplecticState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    std::vector<std::string> labels;  // one per mode

    int num_modes() const { return static_cast<int>(labels.size()); }
    int mode_index(const std::string& label) const;  // throws UnknownLabel
};

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
Eigen::MatrixXd symplectic_form(int num_modes);

/// Product of per-mode Hamiltonian ground states,
/// cov block = diag(1/(2w), w/2), zero mean.
SymplecticState vacuum_state(std::span<const double> omegas,
                             std::vector<std::string> labels = {});

/// H(t) = 1/2 z^T F(t) z with F = (+) diag(w_m^2, 1) free oscillator blocks
/// plus switched position-position couplings
/// -lambda chi(t) g phi_a phi_b (the sign follows the interaction action
/// +lambda int dt psi_n phi_n).
struct QuadraticHamiltonian {
    struct Coupling {
        int mode_a = 0;
        int mode_b = 0;
        double strength = 0.0;  // g_ab
    };

    std::vector<double> omegas;
    std::vector<Coupling> couplings;
    double lambda = 0.0;
    std::function<double(double)> switching;  // chi(t); empty means 1

    double chi(double t) const { return switching ? switching(t) : 1.0; }
    Eigen::MatrixXd f_matrix(double t) const;
};

/// Classic fixed-step fourth-order Runge-Kutta integration of
/// mean' = Omega F(t) mean, cov' = (Omega F) cov + cov (Omega F)^T,
/// with per-step re-symmetrization of cov. Throws UncertaintyViolated if the
/// evolved covariance breaks cov + (i/2) Omega >= 0 beyond -1e-6.
SymplecticState evolve(const SymplecticState& state, const QuadraticHamiltonian& h, double t_start,
                       double t_end, int n_steps);

/// Step count keeping max(omega) dt at or below 0.05.
int default_rk4_steps(const QuadraticHamiltonian& h, double t_start, double t_end);

/// Restriction of mean and covariance to the kept modes, order preserved.
SymplecticState partial_trace(const SymplecticState& state, std::span<const int> keep);
SymplecticState partial_trace(const SymplecticState& state,
                              const std::vector<std::string>& keep_labels);

/// Logarithmic negativity across the bipartition (party_a, rest):
/// E_N = sum_j max(0, -ln(2 nu_j)) over symplectic eigenvalues nu_j of the
/// partially transposed covariance.
double log_negativity(const SymplecticState& state, std::span<const int> party_a);
double log_negativity(const SymplecticState& state, const std::vector<std::string>& party_a);

/// Symplectic eigenvalues of a covariance matrix, descending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

struct SymplecticDiagnostics {
    double symmetry_residual = 0.0;     // max |cov - cov^T|
    double min_uncertainty_eig = 0.0;   // min eig of cov + (i/2) Omega
    std::vector<double> mode_purities;  // 1/(2 nu) per single-mode block
};

SymplecticDiagnostics symplectic_check(const SymplecticState& state);

}  // namespace probe
