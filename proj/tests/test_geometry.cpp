#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "probe/geometry.hpp"

using namespace probe;

TEST_SUITE("geometry") {

TEST_CASE("make_grid basic examples") {
    const Grid1D g = make_grid(0.0, 1.0, 3);
    CHECK(g.x[0] == 0.0);
    CHECK(g.x[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.x[2] == 1.0);
    CHECK(g.spacing == doctest::Approx(0.5).epsilon(1e-15));

    const Grid1D wide = make_grid(-10.0, 10.0, 2001);
    CHECK(wide.spacing == doctest::Approx(0.01).epsilon(1e-14));

    CHECK_THROWS_AS(make_grid(1.0, 0.0, 5), InvalidGrid);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 2), InvalidGrid);
}

TEST_CASE("grid points strictly increasing") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lo(-5.0, 0.0), hi(0.5, 7.0);
    std::uniform_int_distribution<int> count(3, 400);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid1D g = make_grid(lo(rng), hi(rng), count(rng));
        for (int i = 1; i < g.n_points; ++i) CHECK(g.x[i] > g.x[i - 1]);
    }
}

TEST_CASE("unit integral on flat background") {
    const Grid1D g = make_grid(0.0, 1.0, 101);
    const auto bg = SpacetimeBackground::flat(g);
    const std::vector<double> one(g.n_points, 1.0);
    CHECK(weighted_inner_product(one, one, bg, g) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symmetric and bilinear on random samples") {
    const Grid1D g = make_grid(-2.0, 3.0, 257);
    const auto bg = SpacetimeBackground::sampled(
        g, [](double x) { return 1.0 + 0.05 * x * x; }, [](double x) { return 1.0 + 0.2 * std::sin(x); });

    std::mt19937 rng(42);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> f(g.n_points), h(g.n_points), k(g.n_points);
        for (int i = 0; i < g.n_points; ++i) {
            f[i] = gauss(rng);
            h[i] = gauss(rng);
            k[i] = gauss(rng);
        }
        const double a = gauss(rng), b = gauss(rng);

        CHECK(weighted_inner_product(f, h, bg, g) == weighted_inner_product(h, f, bg, g));

        std::vector<double> combo(g.n_points);
        for (int i = 0; i < g.n_points; ++i) combo[i] = a * f[i] + b * k[i];
        const double lhs = weighted_inner_product(combo, h, bg, g);
        const double rhs = a * weighted_inner_product(f, h, bg, g) +
                           b * weighted_inner_product(k, h, bg, g);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("even-odd parity integrand vanishes") {
    const Grid1D g = make_grid(-8.0, 8.0, 801);
    const auto bg = SpacetimeBackground::flat(g);
    std::vector<double> v0(g.n_points), v1(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
        v0[i] = oracle::hermite_mode(0, 1.0, g.x[i]);
        v1[i] = oracle::hermite_mode(1, 1.0, g.x[i]);
    }
    CHECK(std::abs(weighted_inner_product(v0, v1, bg, g)) < 1e-12);
    CHECK(weighted_inner_product(v0, v0, bg, g) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("trapezoid refinement is second order") {
    auto integral = [](int n) {
        const Grid1D g = make_grid(0.0, 1.0, n);
        const auto bg = SpacetimeBackground::sampled(
            g, [](double x) { return 1.0 + 0.3 * x; }, [](double x) { return 1.0 + x * x; });
        std::vector<double> f(g.n_points), h(g.n_points);
        for (int i = 0; i < g.n_points; ++i) {
            f[i] = std::exp(g.x[i]);
            h[i] = std::cos(2.0 * g.x[i]);
        }
        return weighted_inner_product(f, h, bg, g);
    };
    const double reference = integral(8193);
    const double err_coarse = std::abs(integral(65) - reference);
    const double err_fine = std::abs(integral(129) - reference);
    CHECK(err_coarse / err_fine > 3.0);
    CHECK(err_coarse / err_fine < 5.0);
}

TEST_CASE("confinement gate") {
    const Grid1D g = make_grid(-10.0, 10.0, 501);
    CHECK(passes_confinement_gate(Potential::harmonic(g, 1.0, 1.0), g));
    CHECK(passes_confinement_gate(Potential::double_well(g, 0.3, 1.0, -5.0, 5.0), g));
    CHECK_FALSE(passes_confinement_gate(Potential::sampled(g, [](double) { return 0.5; }), g));
}

TEST_CASE("shape mismatch is rejected") {
    const Grid1D g = make_grid(0.0, 1.0, 11);
    const auto bg = SpacetimeBackground::flat(g);
    const std::vector<double> good(11, 1.0), bad(10, 1.0);
    CHECK_THROWS_AS(weighted_inner_product(good, bad, bg, g), ShapeMismatch);
}

TEST_CASE("background positivity enforced") {
    const Grid1D g = make_grid(-1.0, 1.0, 11);
    CHECK_THROWS_AS(SpacetimeBackground::sampled(
                        g, [](double x) { return x; }, [](double) { return 1.0; }),
                    NonPositive);
}

}  // TEST_SUITE
