#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "probe/experiments.hpp"

using namespace probe;

namespace {

// Small, fast reduction setup for structural checks; the production-scale
// scaling study lives in the acceptance suite.
ReductionConfig tiny_reduction() {
    ReductionConfig cfg;
    cfg.probe = {-8.0, 8.0, 401, 0.5, 1.0, 0.0};
    cfg.n_probe_modes = 4;
    cfg.detector_modes = {0};
    cfg.field_box_factor = 4.0;
    cfg.field_mass = 0.3;
    cfg.field_k_max = 12;
    cfg.smearing_amplitude = 3.0;
    cfg.smearing_width = 1.5;
    cfg.smearing_center = 0.2;
    cfg.switching = {4.0, 0.8};
    cfg.t_start = 0.0;
    cfg.t_end = 8.0;
    cfg.rk4_steps = 500;
    cfg.lambdas = {0.004, 0.008, 0.016, 0.032};
    return cfg;
}

HarvestConfig small_harvest() {
    HarvestConfig cfg;
    cfg.x_min = -14.0;
    cfg.x_max = 14.0;
    cfg.n_points = 701;
    cfg.well_mass = 0.3;
    cfg.well_frequency = 1.0;
    cfg.x_a = -7.0;
    cfg.x_b = 7.0;
    cfg.overlap_threshold = 1e-6;
    cfg.field_box_factor = 4.0;
    cfg.field_mass = 0.1;
    cfg.field_k_max = 24;
    cfg.smearing_amplitude = 2.0;
    cfg.switching = {5.0, 1.5};
    cfg.t_start = 0.0;
    cfg.t_end = 10.0;
    cfg.rk4_steps = 600;
    cfg.lambda = 1e-2;
    return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("fit_scaling recovers exact power laws") {
    const std::vector<double> lambdas = {1e-3, 2e-3, 4e-3, 8e-3};

    std::vector<double> quartic, quadratic;
    for (double l : lambdas) {
        quartic.push_back(std::pow(l, 4));
        quadratic.push_back(l * l);
    }
    const FitResult f4 = fit_scaling(quartic, lambdas);
    CHECK(f4.slope == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(f4.max_residual < 1e-10);

    const FitResult f2 = fit_scaling(quadratic, lambdas);
    CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-10));

    // c1 lambda^2 + c2 lambda^4 with c1 = 0 reduces to the quartic case
    std::vector<double> mixed;
    for (double l : lambdas) mixed.push_back(0.0 * l * l + 2.5 * std::pow(l, 4));
    CHECK(fit_scaling(mixed, lambdas).slope == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("fit_scaling degenerate inputs") {
    const std::vector<double> two_l = {1e-3, 2e-3};
    const std::vector<double> two_d = {1.0, 2.0};
    CHECK_THROWS_AS(fit_scaling(two_d, two_l), DegenerateFit);

    const std::vector<double> with_zero_l = {0.0, 1e-3, 2e-3};
    const std::vector<double> with_zero_d = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_scaling(with_zero_d, with_zero_l), DegenerateFit);

    const std::vector<double> mismatch = {1.0};
    CHECK_THROWS_AS(fit_scaling(mismatch, two_l), ShapeMismatch);
}

TEST_CASE("lapse rescaling records") {
    const ProperFrameRecord unit = lapse_rescale(2.0, 1.0);
    CHECK(unit.proper_omega == 2.0);
    CHECK(unit.dtau_dt == 1.0);
    CHECK(unit.amplitude_factor == 1.0);

    const ProperFrameRecord r = lapse_rescale(2.0, 2.0);
    CHECK(r.proper_omega == doctest::Approx(1.0));
    CHECK(r.dtau_dt == doctest::Approx(2.0));
    CHECK(r.amplitude_factor == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(lapse_rescale(1.0, 0.0), NonPositiveLapse);
    CHECK_THROWS_AS(lapse_rescale(1.0, -2.0), NonPositiveLapse);
}

TEST_CASE("rescaled action coefficients reach the unit-mass oscillator form") {
    for (double omega : {0.7, 1.0, 3.2}) {
        for (double lapse : {0.5, 1.0, 2.0, 4.4}) {
            const OscillatorCoefficients mid = reparametrize_to_proper_time(omega, lapse);
            CHECK(mid.kinetic == doctest::Approx(lapse).epsilon(1e-15));
            CHECK(mid.potential == doctest::Approx(omega * omega / lapse).epsilon(1e-15));

            const OscillatorCoefficients done = rescale_amplitude(mid, lapse);
            const double proper = lapse_rescale(omega, lapse).proper_omega;
            CHECK(done.kinetic == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(done.potential == doctest::Approx(proper * proper).epsilon(1e-14));
        }
    }
}

TEST_CASE("reduction at zero coupling gives exactly coincident detectors") {
    ReductionConfig cfg = tiny_reduction();
    cfg.lambdas = {0.0, 0.004, 0.008, 0.016};
    const ReductionReport report = run_reduction(cfg);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].dist_max <= 1e-9);
    CHECK(report.rows[0].dist_fro <= 1e-9);
    // zero-lambda row is excluded from the fit; three positive pairs remain
    CHECK(std::isfinite(report.slope));
}

TEST_CASE("reduction distances grow monotonically and stay symplectic") {
    const ReductionReport report = run_reduction(tiny_reduction());
    CHECK(report.monotone);
    for (const auto& row : report.rows) {
        CHECK(row.min_uncertainty_full >= -1e-9);
        CHECK(row.min_uncertainty_udw >= -1e-9);
    }
    CHECK(report.slope > 2.0);  // beyond-second-order onset; exact gate in acceptance
}

TEST_CASE("reduction config validation") {
    ReductionConfig cfg = tiny_reduction();
    cfg.detector_modes = {7};
    CHECK_THROWS_AS(run_reduction(cfg), ShapeMismatch);

    cfg = tiny_reduction();
    cfg.lambdas = {0.01, 0.005};
    CHECK_THROWS_AS(run_reduction(cfg), ShapeMismatch);
}

TEST_CASE("harvesting gates") {
    SUBCASE("zero coupling harvests nothing") {
        HarvestConfig cfg = small_harvest();
        cfg.lambda = 0.0;
        const HarvestResult r = run_harvesting(cfg);
        CHECK(r.log_negativity == 0.0);
        CHECK(r.max_overlap < cfg.overlap_threshold);
    }

    SUBCASE("wells one width apart fail the overlap gate") {
        HarvestConfig cfg = small_harvest();
        cfg.x_a = -0.5;
        cfg.x_b = 0.5;
        CHECK_THROWS_AS(run_harvesting(cfg), OverlapGateFailed);
        try {
            run_harvesting(cfg);
        } catch (const OverlapGateFailed& e) {
            CHECK(e.max_overlap > 0.1);
        }
    }
}

TEST_CASE("harvesting is symmetric under mirroring the wells") {
    const HarvestConfig cfg = small_harvest();
    HarvestConfig mirrored = cfg;
    mirrored.x_a = -cfg.x_b;
    mirrored.x_b = -cfg.x_a;

    const HarvestResult base = run_harvesting(cfg);
    const HarvestResult mirror = run_harvesting(mirrored);
    CHECK(std::abs(base.log_negativity - mirror.log_negativity) < 1e-8);
    CHECK(base.omega_a == doctest::Approx(base.omega_b).epsilon(1e-12));
}

}  // TEST_SUITE
