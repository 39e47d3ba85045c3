#pragma once

#include <functional>
#include <span>
#include <vector>

#include "probe/errors.hpp"

namespace probe {

enum class Boundary { Dirichlet };

/// Uniform spatial grid on [x_min, x_max] with Dirichlet ends.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_points = 0;
    double spacing = 0.0;
    Boundary boundary = Boundary::Dirichlet;
    std::vector<double> x;  // strictly increasing sample points

    double extent() const { return x_max - x_min; }

    bool same_as(const Grid1D& other) const {
        return n_points == other.n_points && x_min == other.x_min && x_max == other.x_max;
    }
};

Grid1D make_grid(double x_min, double x_max, int n_points);

/// Static background: lapse N(x) and spatial metric component h(x),
/// both sampled on the grid and strictly positive.
struct SpacetimeBackground {
    std::vector<double> lapse;   // N(x)
    std::vector<double> metric;  // h(x)

    static SpacetimeBackground flat(const Grid1D& grid);
    static SpacetimeBackground sampled(const Grid1D& grid,
                                       const std::function<double(double)>& lapse_fn,
                                       const std::function<double(double)>& metric_fn);
};

/// Confining potential U(x) sampled on the grid.
struct Potential {
    std::vector<double> u;

    static Potential sampled(const Grid1D& grid, const std::function<double(double)>& u_fn);
    /// U(x) = (m^2 + Omega^4 (x - center)^2) / 2
    static Potential harmonic(const Grid1D& grid, double mass, double omega, double center = 0.0);
    /// Two harmonic wells of curvature Omega^4 at x_a and x_b joined by a
    /// quartic barrier: U = m^2/2 + barrier * Omega^4/(2 d^2) (x-x_a)^2 (x-x_b)^2.
    static Potential double_well(const Grid1D& grid, double mass, double omega, double x_a,
                                 double x_b, double barrier = 1.0);
};

/// Endpoint gate used as a finite-grid proxy for U -> infinity away from the
/// minima: U(end) >= 10 * min(U) + 10 / (x_max - x_min)^2 at both ends.
bool passes_confinement_gate(const Potential& pot, const Grid1D& grid);

/// Trapezoid approximation of the inner product that makes the spatial
/// operator self-adjoint: integral of (sqrt(h)/N) f g dx.
double weighted_inner_product(std::span<const double> f, std::span<const double> g,
                              const SpacetimeBackground& bg, const Grid1D& grid);

/// Weight sqrt(h(x_i))/N(x_i) at every grid point.
std::vector<double> inner_product_weight(const SpacetimeBackground& bg, const Grid1D& grid);

}  // namespace probe
