#include "probe/modes.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

namespace probe {

namespace {

constexpr double kPi = 3.14159265358979323846;

// a(x) = N/sqrt(h); the weighted inner product weight is 1/a.
std::vector<double> metric_coefficient(const SpacetimeBackground& bg, int n) {
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = bg.lapse[i] / std::sqrt(bg.metric[i]);
    return a;
}

}  // namespace

E2Operator::E2Operator(Grid1D grid, SpacetimeBackground bg,
                       Eigen::SparseMatrix<double> quad_form, Eigen::VectorXd mass)
    : grid_(std::move(grid)),
      background_(std::move(bg)),
      quad_form_(std::move(quad_form)),
      mass_(std::move(mass)) {}

Eigen::VectorXd E2Operator::apply(const Eigen::VectorXd& interior) const {
    if (interior.size() != mass_.size())
        throw ShapeMismatch("E2Operator::apply: interior size mismatch");
    Eigen::VectorXd s = quad_form_ * interior;
    return s.cwiseQuotient(mass_);
}

std::vector<double> E2Operator::apply_full(std::span<const double> f) const {
    const int n = grid_.n_points;
    if (static_cast<int>(f.size()) != n)
        throw ShapeMismatch("E2Operator::apply_full: sample count mismatch");
    Eigen::VectorXd interior(n - 2);
    for (int i = 1; i < n - 1; ++i) interior[i - 1] = f[i];
    const Eigen::VectorXd out = apply(interior);
    std::vector<double> full(n, 0.0);
    for (int i = 1; i < n - 1; ++i) full[i] = out[i - 1];
    return full;
}

Eigen::MatrixXd E2Operator::dense() const {
    Eigen::MatrixXd s = Eigen::MatrixXd(quad_form_);
    return mass_.cwiseInverse().asDiagonal() * s;
}

E2Operator assemble_e2(const Grid1D& grid, const SpacetimeBackground& bg, const Potential& pot,
                       bool enforce_confinement) {
    const int n = grid.n_points;
    if (static_cast<int>(bg.lapse.size()) != n || static_cast<int>(pot.u.size()) != n)
        throw ShapeMismatch("assemble_e2: background/potential not sampled on grid");
    if (enforce_confinement && !passes_confinement_gate(pot, grid))
        throw NotConfining("assemble_e2: potential fails the endpoint confinement gate");

    const double dx = grid.spacing;
    const int m = n - 2;            // interior unknowns, grid indices 1..n-2
    const int n_half = n - 1;       // half cells between consecutive grid points
    const auto a = metric_coefficient(bg, n);

    // Midpoint coefficient a_{i+1/2}: fourth-order interpolation in the
    // interior, plain average in the outermost cells.
    std::vector<double> a_half(n_half);
    for (int h = 0; h < n_half; ++h) {
        if (h >= 1 && h + 2 <= n - 1)
            a_half[h] = (9.0 * (a[h] + a[h + 1]) - (a[h - 1] + a[h + 2])) / 16.0;
        else
            a_half[h] = 0.5 * (a[h] + a[h + 1]);
        if (!(a_half[h] > 0.0)) a_half[h] = 0.5 * (a[h] + a[h + 1]);
    }

    // Staggered gradient G: rows are half cells, columns interior points.
    // Interior rows use the fourth-order stencil
    //   f'(x_{h+1/2}) ~ [27(f_{h+1} - f_h) - (f_{h+2} - f_{h-1})] / (24 dx),
    // the outermost rows the second-order difference. Dirichlet values at the
    // grid ends drop out of the column space.
    Eigen::SparseMatrix<double> grad(n_half, m);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(n_half) * 4);
        auto add = [&](int row, int grid_index, double value) {
            if (grid_index >= 1 && grid_index <= n - 2)
                trip.emplace_back(row, grid_index - 1, value);
        };
        const double c27 = 27.0 / (24.0 * dx);
        const double c1 = 1.0 / (24.0 * dx);
        for (int h = 0; h < n_half; ++h) {
            if (h >= 1 && h <= n - 3) {
                add(h, h - 1, c1);
                add(h, h, -c27);
                add(h, h + 1, c27);
                add(h, h + 2, -c1);
            } else {
                add(h, h, -1.0 / dx);
                add(h, h + 1, 1.0 / dx);
            }
        }
        grad.setFromTriplets(trip.begin(), trip.end());
    }

    Eigen::VectorXd flux_weight(n_half);
    for (int h = 0; h < n_half; ++h) flux_weight[h] = a_half[h] * dx;

    Eigen::SparseMatrix<double> quad = grad.transpose() * flux_weight.asDiagonal() * grad;

    // Potential part 2 N^2 U, diagonal in the weighted metric.
    Eigen::VectorXd mass(m);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(m);
        for (int i = 1; i <= n - 2; ++i) {
            const double w = std::sqrt(bg.metric[i]) / bg.lapse[i];
            mass[i - 1] = w * dx;
            const double diag = 2.0 * bg.lapse[i] * bg.lapse[i] * pot.u[i] * w * dx;
            trip.emplace_back(i - 1, i - 1, diag);
        }
        Eigen::SparseMatrix<double> potential(m, m);
        potential.setFromTriplets(trip.begin(), trip.end());
        quad += potential;
    }
    quad.makeCompressed();

    return E2Operator(grid, bg, std::move(quad), std::move(mass));
}

double ModeBasis::omega(int n) const { return std::sqrt(omega_sq.at(n)); }

namespace {

// Shift-invert subspace iteration for the lowest eigenpairs of the pencil
// (S, M) with M diagonal. Works on the symmetrically scaled matrix
// D^-1 S D^-1, D = sqrt(M), factored once with sparse LDLT.
struct EigenResult {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  // columns, M-orthonormal
};

EigenResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& quad, const Eigen::VectorXd& mass,
                              int k) {
    const int m = static_cast<int>(mass.size());
    const Eigen::VectorXd d = mass.cwiseSqrt();
    const Eigen::VectorXd d_inv = d.cwiseInverse();

    Eigen::SparseMatrix<double> scaled = d_inv.asDiagonal() * quad * d_inv.asDiagonal();
    scaled.makeCompressed();

    // Lower bound on the spectrum from the diagonal potential part keeps the
    // factorization on the definite side even for dipping potentials.
    double diag_min = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = scaled.coeff(i, i);
        if (i == 0 || v < diag_min) diag_min = v;
    }
    double shift = 0.0;
    if (diag_min <= 0.0) shift = 2.0 * diag_min - 1.0;

    Eigen::SparseMatrix<double> shifted = scaled;
    if (shift != 0.0) {
        Eigen::SparseMatrix<double> ident(m, m);
        ident.setIdentity();
        shifted = scaled - shift * ident;
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success)
        throw ConvergenceFailure("solve_modes: factorization of the spatial operator failed");

    const int block = std::min(m, k + std::max(8, k / 2));

    // Deterministic start: low sine profiles span the smooth end of the spectrum.
    Eigen::MatrixXd basis(m, block);
    for (int j = 0; j < block; ++j)
        for (int i = 0; i < m; ++i)
            basis(i, j) = std::sin((j + 1) * kPi * (i + 1) / static_cast<double>(m + 1));

    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(block);
    // The residual floor is set by rounding at the operator scale, which the
    // stiff flux part dominates (~1/dx^2); Ritz values are accurate to the
    // square of the residual over the gap.
    const double norm_est = scaled.diagonal().cwiseAbs().maxCoeff() + std::abs(shift);
    const double tol = 1e-12 * std::max(norm_est, 1.0);
    const int max_iter = 600;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::MatrixXd y = factor.solve(basis);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, block);

        Eigen::MatrixXd sq = scaled * q;
        Eigen::MatrixXd small = q.transpose() * sq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
        if (es.info() != Eigen::Success)
            throw ConvergenceFailure("solve_modes: dense Ritz solve failed");

        basis = q * es.eigenvectors();
        ritz = es.eigenvalues();

        // Residual check on the k wanted pairs.
        Eigen::MatrixXd resid = scaled * basis.leftCols(k) -
                                basis.leftCols(k) * ritz.head(k).asDiagonal();
        double worst = 0.0;
        for (int j = 0; j < k; ++j) worst = std::max(worst, resid.col(j).norm());
        if (worst <= tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceFailure("solve_modes: subspace iteration did not converge");

    EigenResult out;
    out.values = ritz.head(k);
    out.vectors = d_inv.asDiagonal() * basis.leftCols(k);
    return out;
}

}  // namespace

ModeBasis solve_modes(const E2Operator& op, int k_max) {
    const int m = op.n_interior();
    if (k_max < 1 || k_max > m)
        throw InvalidGrid("solve_modes: k_max must be in [1, n_points - 2]");

    EigenResult eig = lowest_eigenpairs(op.quad_form(), op.mass(), k_max);
    if (eig.values[0] <= 0.0)
        throw NonPositive("solve_modes: operator has non-positive eigenvalues");

    const int n = op.grid().n_points;
    ModeBasis basis;
    basis.grid = op.grid();
    basis.background = op.background();
    basis.omega_sq.resize(k_max);
    basis.modes.resize(k_max);
    for (int j = 0; j < k_max; ++j) {
        basis.omega_sq[j] = eig.values[j];
        std::vector<double> mode(n, 0.0);
        for (int i = 1; i <= n - 2; ++i) mode[i] = eig.vectors(i - 1, j);

        // Sign convention: positive at the leftmost point of maximal |v|.
        int peak = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(mode[i]);
            if (mag > best) {
                best = mag;
                peak = i;
            }
        }
        if (mode[peak] < 0.0)
            for (auto& v : mode) v = -v;
        basis.modes[j] = std::move(mode);
    }
    return basis;
}

Eigen::MatrixXd gram_matrix(const ModeBasis& basis) {
    const int k = basis.size();
    Eigen::MatrixXd g(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            g(i, j) = weighted_inner_product(basis.modes[i], basis.modes[j], basis.background,
                                             basis.grid);
            g(j, i) = g(i, j);
        }
    return g;
}

double resolution_residual(const ModeBasis& basis, std::span<const double> f) {
    const int n = basis.grid.n_points;
    if (static_cast<int>(f.size()) != n)
        throw ShapeMismatch("resolution_residual: sample count mismatch");

    std::vector<double> recon(n, 0.0);
    for (int j = 0; j < basis.size(); ++j) {
        const double c = weighted_inner_product(basis.modes[j], f, basis.background, basis.grid);
        for (int i = 0; i < n; ++i) recon[i] += c * basis.modes[j][i];
    }
    double err = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
        err = std::max(err, std::abs(f[i] - recon[i]));
        norm = std::max(norm, std::abs(f[i]));
    }
    if (norm == 0.0) return 0.0;
    return err / norm;
}

Eigen::MatrixXd mode_overlap(const ModeBasis& a, const ModeBasis& b) {
    if (!a.grid.same_as(b.grid) || a.background.lapse != b.background.lapse ||
        a.background.metric != b.background.metric)
        throw GridMismatch("mode_overlap: bases must share grid and background");
    Eigen::MatrixXd o(a.size(), b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j)
            o(i, j) = weighted_inner_product(a.modes[i], b.modes[j], a.background, a.grid);
    return o;
}

double FieldBox::mode(int k, double x) const {
    const double xi = x - x_left;
    if (xi < 0.0 || xi > length) throw OutOfBox("FieldBox::mode: point outside the box");
    return std::sqrt(2.0 / length) * std::sin(k * kPi * xi / length);
}

double FieldBox::omega(int k) const {
    const double kappa = k * kPi / length;
    return std::sqrt(mass * mass + kappa * kappa);
}

std::vector<double> FieldBox::omegas() const {
    std::vector<double> w(k_max);
    for (int k = 1; k <= k_max; ++k) w[k - 1] = omega(k);
    return w;
}

FieldBox FieldBox::enclosing(const Grid1D& grid, double factor, double mass, int k_max) {
    FieldBox box;
    box.length = factor * grid.extent();
    box.mass = mass;
    box.k_max = k_max;
    const double center = 0.5 * (grid.x_min + grid.x_max);
    box.x_left = center - 0.5 * box.length;
    return box;
}

std::vector<double> SmearingProfile::sample_gaussian(double t_start, double t_end, int n_samples,
                                                     double center, double width) {
    std::vector<double> chi(n_samples);
    const double dt = (t_end - t_start) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double t = t_start + i * dt;
        const double u = (t - center) / width;
        chi[i] = std::exp(-0.5 * u * u);
    }
    return chi;
}

CouplingMatrix project_smearing(std::span<const double> sigma, const ModeBasis& basis,
                                const FieldBox& field) {
    const int n = basis.grid.n_points;
    if (static_cast<int>(sigma.size()) != n)
        throw GridMismatch("project_smearing: sigma not sampled on the probe grid");
    if (basis.grid.x_min < field.x_left - 1e-12 ||
        basis.grid.x_max > field.x_left + field.length + 1e-12)
        throw GridMismatch("project_smearing: field box does not enclose the probe grid");

    const double dx = basis.grid.spacing;
    CouplingMatrix g(basis.size(), field.k_max);
    std::vector<double> measure(n);  // N sqrt(h) sigma, trapezoid-weighted
    for (int i = 0; i < n; ++i) {
        const double w = basis.background.lapse[i] * std::sqrt(basis.background.metric[i]);
        measure[i] = w * sigma[i] * dx * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }
    for (int k = 1; k <= field.k_max; ++k) {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = field.mode(k, basis.grid.x[i]);
        for (int m = 0; m < basis.size(); ++m) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += measure[i] * basis.modes[m][i] * u[i];
            g(m, k - 1) = acc;
        }
    }
    return g;
}

}  // namespace probe
