#include "probe/kernels.hpp"

#include <cmath>

namespace probe {

namespace {
constexpr double kPi = 3.14159265358979323846;
const Complex kImag{0.0, 1.0};
}  // namespace

Complex wightman(double omega, double t, double t_prime) {
    if (!(omega > 0.0)) throw NonPositiveFrequency("wightman: omega must be positive");
    return (kImag / (2.0 * omega)) * std::exp(-kImag * omega * (t - t_prime));
}

Complex feynman(double omega, double t, double t_prime) {
    if (!(omega > 0.0)) throw NonPositiveFrequency("feynman: omega must be positive");
    return (kImag / (2.0 * omega)) * std::exp(-kImag * omega * std::abs(t - t_prime));
}

KernelSet KernelSet::from_omegas(std::vector<double> omegas) {
    for (double w : omegas)
        if (!(w > 0.0)) throw NonPositiveFrequency("KernelSet: all omegas must be positive");
    return KernelSet{std::move(omegas)};
}

InfluencePhaseValue influence_phase(const SourceTrajectory& psi, const SourceTrajectory& psi_prime,
                                    const KernelSet& kernels, double lambda) {
    if (kernels.omegas.empty()) throw GridMismatch("influence_phase: empty kernel set");
    const int n_modes = static_cast<int>(kernels.omegas.size());
    if (static_cast<int>(psi.per_mode.size()) != n_modes ||
        static_cast<int>(psi_prime.per_mode.size()) != n_modes)
        throw GridMismatch("influence_phase: trajectory mode count differs from kernel set");
    if (psi.t_start != psi_prime.t_start || psi.t_end != psi_prime.t_end ||
        psi.n_samples() != psi_prime.n_samples())
        throw GridMismatch("influence_phase: trajectories on different time grids");
    const int n = psi.n_samples();
    if (n < 2) throw GridMismatch("influence_phase: need at least two time samples");
    for (int m = 0; m < n_modes; ++m)
        if (psi.per_mode[m].size() != n || psi_prime.per_mode[m].size() != n)
            throw GridMismatch("influence_phase: ragged trajectory samples");

    const double dt = psi.dt();
    std::vector<double> w(n, dt);
    w.front() = 0.5 * dt;
    w.back() = 0.5 * dt;

    Complex acc{0.0, 0.0};
    double scale = 0.0;
    std::vector<Complex> phase(n);

    for (int m = 0; m < n_modes; ++m) {
        const double omega = kernels.omegas[m];
        if (!(omega > 0.0)) throw NonPositiveFrequency("influence_phase: omega must be positive");
        const Complex pref = kImag / (2.0 * omega);
        const auto& f = psi.per_mode[m];
        const auto& fp = psi_prime.per_mode[m];

        for (int j = 0; j < n; ++j) {
            const double t = psi.t_start + j * dt;
            phase[j] = std::exp(-kImag * omega * t);
        }

        Complex mode_acc{0.0, 0.0};
        double mode_scale = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const Complex w_jk = pref * phase[j] * std::conj(phase[k]);
                const Complex g_jk = (j >= k) ? w_jk : pref * std::conj(phase[j]) * phase[k];
                const Complex term = g_jk * f[j] * f[k] - w_jk * fp[j] * f[k] -
                                     std::conj(g_jk) * fp[j] * fp[k] +
                                     std::conj(w_jk) * f[j] * fp[k];
                const double ww = w[j] * w[k];
                mode_acc += ww * term;
                mode_scale += ww * std::abs(pref) *
                              (std::abs(f[j] * f[k]) + std::abs(fp[j] * f[k]) +
                               std::abs(fp[j] * fp[k]) + std::abs(f[j] * fp[k]));
            }
        }

        // Diagonal kink correction for the two |t-t'| kernels: the jump of
        // d/dt' across t' = t is +1 for G and -1 for -G*, independent of
        // omega, so the composite trapezoid gains (dt^2/12) w_j (psi^2 - psi'^2)
        // per interior row. Vanishes identically on the forward = backward
        // diagonal psi' = psi.
        Complex kink{0.0, 0.0};
        for (int j = 1; j + 1 < n; ++j) kink += w[j] * (f[j] * f[j] - fp[j] * fp[j]);
        mode_acc += (dt * dt / 12.0) * kink;

        acc += mode_acc;
        scale += mode_scale;
    }

    InfluencePhaseValue out;
    out.value = 0.5 * lambda * lambda * acc;
    out.term_scale = 0.5 * lambda * lambda * scale;
    return out;
}

Complex field_wightman_box(double box_length, double field_mass, int k_max, double x, double t,
                           double x_prime, double t_prime) {
    if (!(field_mass > 0.0))
        throw NonPositiveFrequency("field_wightman_box: field mass must be positive");
    if (!(x > 0.0 && x < box_length && x_prime > 0.0 && x_prime < box_length))
        throw OutOfBox("field_wightman_box: points must lie strictly inside the box");

    const double norm = 2.0 / box_length;
    Complex acc{0.0, 0.0};
    for (int k = 1; k <= k_max; ++k) {
        const double kappa = k * kPi / box_length;
        const double omega = std::sqrt(field_mass * field_mass + kappa * kappa);
        const double uu = norm * std::sin(kappa * x) * std::sin(kappa * x_prime);
        acc += uu / (2.0 * omega) * std::exp(-kImag * omega * (t - t_prime));
    }
    return acc;
}

double udw_response(double detector_omega, std::span<const double> chi, double t_start,
                    double t_end, std::span<const double> couplings,
                    std::span<const double> field_omegas, double lambda) {
    if (!(detector_omega > 0.0))
        throw NonPositiveFrequency("udw_response: detector gap must be positive");
    if (couplings.size() != field_omegas.size())
        throw GridMismatch("udw_response: couplings and field omegas differ in length");
    const int n = static_cast<int>(chi.size());
    if (n < 2) throw GridMismatch("udw_response: switching needs at least two samples");

    const double dt = (t_end - t_start) / (n - 1);
    double acc = 0.0;
    for (size_t k = 0; k < field_omegas.size(); ++k) {
        const double wk = field_omegas[k];
        if (!(wk > 0.0)) throw NonPositiveFrequency("udw_response: field omega must be positive");
        Complex amp{0.0, 0.0};
        const double freq = detector_omega + wk;
        for (int j = 0; j < n; ++j) {
            const double t = t_start + j * dt;
            const double wj = (j == 0 || j == n - 1) ? 0.5 * dt : dt;
            amp += wj * chi[j] * std::exp(kImag * freq * t);
        }
        acc += couplings[k] * couplings[k] * std::norm(amp) / wk;
    }
    return lambda * lambda * acc / (4.0 * detector_omega);
}

}  // namespace probe
