#include "probe/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace probe {

int SymplecticState::mode_index(const std::string& label) const {
    for (int i = 0; i < num_modes(); ++i)
        if (labels[i] == label) return i;
    throw UnknownLabel("no mode labeled '" + label + "'");
}

Eigen::MatrixXd symplectic_form(int num_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
    for (int m = 0; m < num_modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

SymplecticState vacuum_state(std::span<const double> omegas, std::vector<std::string> labels) {
    const int m = static_cast<int>(omegas.size());
    if (labels.empty()) {
        labels.reserve(m);
        for (int i = 0; i < m; ++i) labels.push_back("m" + std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != m)
        throw ShapeMismatch("vacuum_state: label count differs from mode count");

    SymplecticState st;
    st.labels = std::move(labels);
    st.mean = Eigen::VectorXd::Zero(2 * m);
    st.cov = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        const double w = omegas[i];
        if (!(w > 0.0)) throw NonPositiveFrequency("vacuum_state: omega must be positive");
        st.cov(2 * i, 2 * i) = 1.0 / (2.0 * w);
        st.cov(2 * i + 1, 2 * i + 1) = w / 2.0;
    }
    return st;
}

Eigen::MatrixXd QuadraticHamiltonian::f_matrix(double t) const {
    const int m = static_cast<int>(omegas.size());
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        f(2 * i, 2 * i) = omegas[i] * omegas[i];
        f(2 * i + 1, 2 * i + 1) = 1.0;
    }
    const double c = -lambda * chi(t);
    for (const auto& cp : couplings) {
        f(2 * cp.mode_a, 2 * cp.mode_b) += c * cp.strength;
        f(2 * cp.mode_b, 2 * cp.mode_a) += c * cp.strength;
    }
    return f;
}

namespace {

// Generator A(t) = Omega F(t) applied to a matrix without forming F:
//   phi-row of A X is the pi-row of X,
//   pi-row is -(w^2 phi-row) + lambda chi g (partner phi-rows).
struct Generator {
    const QuadraticHamiltonian* h;

    void apply(double t, const Eigen::MatrixXd& x, Eigen::MatrixXd& out) const {
        const int m = static_cast<int>(h->omegas.size());
        for (int i = 0; i < m; ++i) {
            out.row(2 * i) = x.row(2 * i + 1);
            out.row(2 * i + 1) = -(h->omegas[i] * h->omegas[i]) * x.row(2 * i);
        }
        const double c = h->lambda * h->chi(t);
        if (c != 0.0) {
            for (const auto& cp : h->couplings) {
                out.row(2 * cp.mode_a + 1) += c * cp.strength * x.row(2 * cp.mode_b);
                out.row(2 * cp.mode_b + 1) += c * cp.strength * x.row(2 * cp.mode_a);
            }
        }
    }

    void apply(double t, const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
        const int m = static_cast<int>(h->omegas.size());
        for (int i = 0; i < m; ++i) {
            out[2 * i] = x[2 * i + 1];
            out[2 * i + 1] = -(h->omegas[i] * h->omegas[i]) * x[2 * i];
        }
        const double c = h->lambda * h->chi(t);
        if (c != 0.0) {
            for (const auto& cp : h->couplings) {
                out[2 * cp.mode_a + 1] += c * cp.strength * x[2 * cp.mode_b];
                out[2 * cp.mode_b + 1] += c * cp.strength * x[2 * cp.mode_a];
            }
        }
    }
};

double min_uncertainty_eigenvalue(const Eigen::MatrixXd& cov) {
    const int dim = static_cast<int>(cov.rows());
    Eigen::MatrixXcd herm = cov.cast<std::complex<double>>();
    const std::complex<double> half_i{0.0, 0.5};
    for (int m = 0; m < dim / 2; ++m) {
        herm(2 * m, 2 * m + 1) += half_i;
        herm(2 * m + 1, 2 * m) -= half_i;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

SymplecticState evolve(const SymplecticState& state, const QuadraticHamiltonian& h, double t_start,
                       double t_end, int n_steps) {
    const int m = state.num_modes();
    if (n_steps < 1) throw ShapeMismatch("evolve: n_steps must be at least 1");
    if (static_cast<int>(h.omegas.size()) != m)
        throw ShapeMismatch("evolve: state and Hamiltonian mode counts differ");
    for (const auto& cp : h.couplings)
        if (cp.mode_a < 0 || cp.mode_a >= m || cp.mode_b < 0 || cp.mode_b >= m)
            throw ShapeMismatch("evolve: coupling references a mode outside the state");

    const double dt = (t_end - t_start) / n_steps;
    const Generator gen{&h};
    const int dim = 2 * m;

    SymplecticState out = state;
    Eigen::MatrixXd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim),
        work(dim, dim);
    Eigen::VectorXd vk1(dim), vk2(dim), vk3(dim), vk4(dim), vtmp(dim);

    auto cov_rhs = [&](double t, const Eigen::MatrixXd& cov, Eigen::MatrixXd& rhs) {
        gen.apply(t, cov, work);
        rhs = work + work.transpose();
    };

    for (int step = 0; step < n_steps; ++step) {
        const double t = t_start + step * dt;
        const double th = t + 0.5 * dt;
        const double tf = t + dt;

        cov_rhs(t, out.cov, k1);
        tmp = out.cov + (0.5 * dt) * k1;
        cov_rhs(th, tmp, k2);
        tmp = out.cov + (0.5 * dt) * k2;
        cov_rhs(th, tmp, k3);
        tmp = out.cov + dt * k3;
        cov_rhs(tf, tmp, k4);
        out.cov += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();

        gen.apply(t, out.mean, vk1);
        vtmp = out.mean + (0.5 * dt) * vk1;
        gen.apply(th, vtmp, vk2);
        vtmp = out.mean + (0.5 * dt) * vk2;
        gen.apply(th, vtmp, vk3);
        vtmp = out.mean + dt * vk3;
        gen.apply(tf, vtmp, vk4);
        out.mean += (dt / 6.0) * (vk1 + 2.0 * vk2 + 2.0 * vk3 + vk4);
    }

    if (min_uncertainty_eigenvalue(out.cov) < -1e-6)
        throw UncertaintyViolated("evolve: uncertainty relation violated; step size too coarse");
    return out;
}

int default_rk4_steps(const QuadraticHamiltonian& h, double t_start, double t_end) {
    double w_max = 0.0;
    for (double w : h.omegas) w_max = std::max(w_max, w);
    const int steps = static_cast<int>(std::ceil((t_end - t_start) * w_max / 0.05));
    return std::max(steps, 1);
}

SymplecticState partial_trace(const SymplecticState& state, std::span<const int> keep) {
    if (keep.empty()) throw UnknownLabel("partial_trace: keep set is empty");
    for (int idx : keep)
        if (idx < 0 || idx >= state.num_modes())
            throw UnknownLabel("partial_trace: mode index out of range");

    const int k = static_cast<int>(keep.size());
    SymplecticState out;
    out.mean.resize(2 * k);
    out.cov.resize(2 * k, 2 * k);
    out.labels.reserve(k);
    for (int a = 0; a < k; ++a) {
        out.labels.push_back(state.labels[keep[a]]);
        for (int ra = 0; ra < 2; ++ra) {
            out.mean[2 * a + ra] = state.mean[2 * keep[a] + ra];
            for (int b = 0; b < k; ++b)
                for (int rb = 0; rb < 2; ++rb)
                    out.cov(2 * a + ra, 2 * b + rb) = state.cov(2 * keep[a] + ra, 2 * keep[b] + rb);
        }
    }
    return out;
}

SymplecticState partial_trace(const SymplecticState& state,
                              const std::vector<std::string>& keep_labels) {
    std::vector<int> keep;
    keep.reserve(keep_labels.size());
    for (const auto& l : keep_labels) keep.push_back(state.mode_index(l));
    return partial_trace(state, keep);
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
    const int m = static_cast<int>(cov.rows()) / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(cov);
    Eigen::VectorXd clamped = root.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd sqrt_cov =
        root.eigenvectors() * clamped.asDiagonal() * root.eigenvectors().transpose();

    Eigen::MatrixXd t = sqrt_cov * symplectic_form(m) * sqrt_cov;  // antisymmetric
    Eigen::MatrixXcd herm = std::complex<double>(0.0, 1.0) * t.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);

    std::vector<double> nus;
    nus.reserve(m);
    for (int i = 2 * m - 1; i >= m; --i) nus.push_back(es.eigenvalues()[i]);
    return nus;  // descending positive half of the +/- pairs
}

namespace {

double negativity_of_partition(const SymplecticState& state, const std::vector<bool>& in_a) {
    const int m = state.num_modes();
    Eigen::VectorXd flip = Eigen::VectorXd::Ones(2 * m);
    for (int i = 0; i < m; ++i)
        if (!in_a[i]) flip[2 * i + 1] = -1.0;  // momentum sign flip on party B

    const Eigen::MatrixXd tilde = flip.asDiagonal() * state.cov * flip.asDiagonal();
    double e_n = 0.0;
    for (double nu : symplectic_eigenvalues(tilde)) {
        const double contribution = -std::log(2.0 * nu);
        // Sub-rounding negativity is quadrature noise, not entanglement;
        // separable states must come out exactly zero.
        if (contribution > 1e-12) e_n += contribution;
    }
    return e_n;
}

}  // namespace

double log_negativity(const SymplecticState& state, std::span<const int> party_a) {
    const int m = state.num_modes();
    if (party_a.empty()) throw BadPartition("log_negativity: party A is empty");
    std::vector<bool> in_a(m, false);
    for (int idx : party_a) {
        if (idx < 0 || idx >= m) throw BadPartition("log_negativity: mode index out of range");
        in_a[idx] = true;
    }
    if (std::all_of(in_a.begin(), in_a.end(), [](bool b) { return b; }))
        throw BadPartition("log_negativity: party B is empty");
    return negativity_of_partition(state, in_a);
}

double log_negativity(const SymplecticState& state, const std::vector<std::string>& party_a) {
    std::vector<int> idx;
    idx.reserve(party_a.size());
    for (const auto& l : party_a) idx.push_back(state.mode_index(l));
    return log_negativity(state, idx);
}

SymplecticDiagnostics symplectic_check(const SymplecticState& state) {
    SymplecticDiagnostics d;
    d.symmetry_residual = (state.cov - state.cov.transpose()).cwiseAbs().maxCoeff();
    d.min_uncertainty_eig = min_uncertainty_eigenvalue(state.cov);
    d.mode_purities.reserve(state.num_modes());
    for (int i = 0; i < state.num_modes(); ++i) {
        const Eigen::Matrix2d block = state.cov.block<2, 2>(2 * i, 2 * i);
        const double nu = std::sqrt(std::max(block.determinant(), 0.0));
        d.mode_purities.push_back(nu > 0.0 ? 1.0 / (2.0 * nu) : 0.0);
    }
    return d;
}

}  // namespace probe
