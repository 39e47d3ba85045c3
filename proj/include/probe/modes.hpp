#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <span>
#include <vector>

#include "probe/geometry.hpp"

namespace probe {

/// Spatial operator E^2 acting on Dirichlet grid functions,
///
///   E^2 f = 2 N^2 U f - (N/sqrt(h)) d/dx[(N/sqrt(h)) f'],
///
/// discretized in flux form: the second-derivative part is assembled as
/// G^T A G from a staggered-grid gradient G (fourth order in the interior)
/// and midpoint coefficients A, so the operator is self-adjoint with respect
/// to the weighted inner product exactly, not just to truncation order.
class E2Operator {
  public:
    E2Operator(Grid1D grid, SpacetimeBackground bg,
               Eigen::SparseMatrix<double> quad_form, Eigen::VectorXd mass);

    const Grid1D& grid() const { return grid_; }
    const SpacetimeBackground& background() const { return background_; }
    int n_interior() const { return static_cast<int>(mass_.size()); }

    /// Quadratic form matrix S with (f, E^2 g)_w = f^T S g on interior values.
    const Eigen::SparseMatrix<double>& quad_form() const { return quad_form_; }
    /// Diagonal of the discrete weighted inner product, M_ii = w_i dx.
    const Eigen::VectorXd& mass() const { return mass_; }

    /// E^2 f on interior values.
    Eigen::VectorXd apply(const Eigen::VectorXd& interior) const;
    /// E^2 f on a full-grid function (Dirichlet ends assumed and preserved).
    std::vector<double> apply_full(std::span<const double> f) const;
    /// Dense matrix of the operator on interior values.
    Eigen::MatrixXd dense() const;

  private:
    Grid1D grid_;
    SpacetimeBackground background_;
    Eigen::SparseMatrix<double> quad_form_;
    Eigen::VectorXd mass_;
};

/// Assemble E^2 for the given background and potential. The confinement gate
/// rejects potentials that do not dominate their minimum at the grid ends;
/// pass enforce_confinement = false for deliberately open configurations
/// (e.g. a constant-potential Dirichlet box).
E2Operator assemble_e2(const Grid1D& grid, const SpacetimeBackground& bg, const Potential& pot,
                       bool enforce_confinement = true);

/// Lowest eigenpairs of E^2, orthonormal under the weighted inner product.
struct ModeBasis {
    std::vector<double> omega_sq;             // ascending, all positive
    std::vector<std::vector<double>> modes;   // sampled on the full grid, zero at the ends
    Grid1D grid;
    SpacetimeBackground background;

    int size() const { return static_cast<int>(omega_sq.size()); }
    double omega(int n) const;
};

ModeBasis solve_modes(const E2Operator& op, int k_max);

/// Gram matrix (v_n, v_m)_w of a basis; identity up to solver tolerance.
Eigen::MatrixXd gram_matrix(const ModeBasis& basis);

/// Sup-norm residual of the truncated expansion of f in the basis,
/// ||f - sum_n (v_n, f) v_n||_inf / ||f||_inf.
double resolution_residual(const ModeBasis& basis, std::span<const double> f);

/// Weighted overlaps (v_n^A, v_m^B)_w between two bases on the same grid.
Eigen::MatrixXd mode_overlap(const ModeBasis& a, const ModeBasis& b);

/// Dirichlet box holding the target field: mode k is
/// u_k(x) = sqrt(2/L) sin(k pi (x - x_left)/L) with
/// omega_k = sqrt(M^2 + (k pi / L)^2), k = 1..k_max.
struct FieldBox {
    double length = 0.0;
    double mass = 0.0;
    int k_max = 0;
    double x_left = 0.0;

    double mode(int k, double x) const;
    double omega(int k) const;
    std::vector<double> omegas() const;

    /// Box of length factor * grid extent, centered on the grid.
    static FieldBox enclosing(const Grid1D& grid, double factor, double mass, int k_max);
};

/// Separable coupling profile zeta(t, x) = chi(t) sigma(x).
struct SmearingProfile {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> chi;    // sampled on a uniform time grid over [t_start, t_end]
    std::vector<double> sigma;  // sampled on the spatial grid

    static std::vector<double> sample_gaussian(double t_start, double t_end, int n_samples,
                                               double center, double width);
};

using CouplingMatrix = Eigen::MatrixXd;

/// Time-independent spatial coupling factors
/// g_nk = integral dx N sqrt(h) v_n(x) sigma(x) u_k(x).
CouplingMatrix project_smearing(std::span<const double> sigma, const ModeBasis& basis,
                                const FieldBox& field);

}  // namespace probe
