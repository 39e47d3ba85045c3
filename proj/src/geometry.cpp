#include "probe/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace probe {

Grid1D make_grid(double x_min, double x_max, int n_points) {
    if (n_points < 3) throw InvalidGrid("make_grid: n_points must be at least 3");
    if (!(x_min < x_max)) throw InvalidGrid("make_grid: requires x_min < x_max");

    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = n_points;
    g.spacing = (x_max - x_min) / static_cast<double>(n_points - 1);
    g.x.resize(n_points);
    for (int i = 0; i < n_points; ++i)
        g.x[i] = x_min + g.spacing * static_cast<double>(i);
    g.x.back() = x_max;
    return g;
}

SpacetimeBackground SpacetimeBackground::flat(const Grid1D& grid) {
    SpacetimeBackground bg;
    bg.lapse.assign(grid.n_points, 1.0);
    bg.metric.assign(grid.n_points, 1.0);
    return bg;
}

SpacetimeBackground SpacetimeBackground::sampled(const Grid1D& grid,
                                                 const std::function<double(double)>& lapse_fn,
                                                 const std::function<double(double)>& metric_fn) {
    SpacetimeBackground bg;
    bg.lapse.resize(grid.n_points);
    bg.metric.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        bg.lapse[i] = lapse_fn(grid.x[i]);
        bg.metric[i] = metric_fn(grid.x[i]);
        if (!(bg.lapse[i] > 0.0))
            throw NonPositive("background: lapse must be positive at every grid point");
        if (!(bg.metric[i] > 0.0))
            throw NonPositive("background: metric must be positive at every grid point");
    }
    return bg;
}

Potential Potential::sampled(const Grid1D& grid, const std::function<double(double)>& u_fn) {
    Potential p;
    p.u.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) p.u[i] = u_fn(grid.x[i]);
    return p;
}

Potential Potential::harmonic(const Grid1D& grid, double mass, double omega, double center) {
    const double m2 = mass * mass;
    const double om4 = omega * omega * omega * omega;
    return sampled(grid, [=](double x) {
        const double d = x - center;
        return 0.5 * (m2 + om4 * d * d);
    });
}

Potential Potential::double_well(const Grid1D& grid, double mass, double omega, double x_a,
                                 double x_b, double barrier) {
    const double m2 = mass * mass;
    const double om4 = omega * omega * omega * omega;
    const double d = x_b - x_a;
    const double c = barrier * om4 / (2.0 * d * d);
    return sampled(grid, [=](double x) {
        const double pa = x - x_a;
        const double pb = x - x_b;
        return 0.5 * m2 + c * pa * pa * pb * pb;
    });
}

bool passes_confinement_gate(const Potential& pot, const Grid1D& grid) {
    const double u_min = *std::min_element(pot.u.begin(), pot.u.end());
    const double span = grid.extent();
    const double floor = 10.0 * u_min + 10.0 / (span * span);
    return pot.u.front() >= floor && pot.u.back() >= floor;
}

std::vector<double> inner_product_weight(const SpacetimeBackground& bg, const Grid1D& grid) {
    std::vector<double> w(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
        w[i] = std::sqrt(bg.metric[i]) / bg.lapse[i];
    return w;
}

double weighted_inner_product(std::span<const double> f, std::span<const double> g,
                              const SpacetimeBackground& bg, const Grid1D& grid) {
    const auto n = static_cast<size_t>(grid.n_points);
    if (f.size() != n || g.size() != n)
        throw ShapeMismatch("weighted_inner_product: sample counts differ from grid");

    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double w = std::sqrt(bg.metric[i]) / bg.lapse[i];
        const double term = w * (f[i] * g[i]);  // grouping keeps (f,g) = (g,f) exact
        acc += (i == 0 || i + 1 == n) ? 0.5 * term : term;
    }
    return acc * grid.spacing;
}

}  // namespace probe
