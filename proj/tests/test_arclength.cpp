#include "ribbonlim/arclength.hpp"
#include "ribbonlim/constraints.hpp"
#include "ribbonlim/curves.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace ribbonlim;

TEST_CASE("already uniform-speed curve is reproduced") {
    const CurveSpec circle = make_circle(0.8);
    const CurveSpec rep = reparameterize_arclength(circle, 32);
    const double L = curve_length(circle);
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        CHECK(std::abs(rep.evaluate_derivatives(t).d1.norm() - L) < 1e-12 * L);
        CHECK((rep.evaluate_derivatives(t).position - circle.evaluate_derivatives(t).position)
                  .norm() < 1e-12);
    }
}

TEST_CASE("quadratically stretched circle arc becomes uniform speed") {
    // Quarter circle with the parameter warped by u = (t + t^2)/2; open basis
    // because the warp is not periodic.
    const CurveSpec stretched = fit_curve(
        [](double t) {
            const double u = 0.5 * (t + t * t);
            return Vec3(std::cos(0.5 * M_PI * u), std::sin(0.5 * M_PI * u), 0.0);
        },
        BasisKind::chebyshev_open, 40);
    const double L = curve_length(stretched);
    CHECK(std::abs(L - 0.5 * M_PI) < 1e-12);

    const CurveSpec rep = reparameterize_arclength(stretched, 64);
    double worst = 0.0;
    for (int i = 0; i <= 512; ++i)
        worst = std::max(worst,
                         std::abs(rep.evaluate_derivatives(i / 512.0).d1.norm() / L - 1.0));
    CHECK(worst < 1e-9);

    // Arclength fraction equals the warp itself on a circle arc, so the
    // inversion has a closed-form oracle.
    const ArclengthMap map(stretched, 64);
    for (double sigma : {0.2, 0.5, 0.77}) {
        const double t = map.t_of_fraction(sigma);
        const double u = 0.5 * (t + t * t);
        CHECK(std::abs(u - sigma) < 1e-12);
    }
}

TEST_CASE("smoothly warped closed circle becomes uniform speed") {
    const CurveSpec warped = fit_curve(
        [](double t) {
            const double u = t + 0.1 * std::sin(2.0 * M_PI * t);
            return Vec3(std::cos(2.0 * M_PI * u), std::sin(2.0 * M_PI * u), 0.0);
        },
        BasisKind::fourier_closed, 81);
    const double L = curve_length(warped);
    CHECK(std::abs(L - 2.0 * M_PI) < 1e-10);
    const CurveSpec rep = reparameterize_arclength(warped, 64);
    double worst = 0.0;
    for (int i = 0; i <= 512; ++i)
        worst = std::max(worst,
                         std::abs(rep.evaluate_derivatives(i / 512.0).d1.norm() / L - 1.0));
    CHECK(worst < 1e-9);
}

TEST_CASE("length is preserved through reparameterization") {
    const CurveSpec helix = make_helix(1.0, 0.7, 4.0);
    const double before = curve_length(helix);
    const CurveSpec rep = reparameterize_arclength(helix, 64);
    const double after = curve_length(rep);
    CHECK(std::abs(after - before) < 1e-10 * before);
    CHECK(std::abs(before - oracles::trapezoid_length(helix, 100000)) < 1e-8 * before);
}

TEST_CASE("frenet scalars are invariant at matched geometric points") {
    const CurveSpec wavy = make_wavy_circle(0.15, 2);
    const ArclengthMap map(wavy, 64);
    const CurveSpec rep = reparameterize_arclength(wavy, 64);
    for (double sigma : {0.12, 0.31, 0.5, 0.68, 0.9}) {
        const double t_orig = map.t_of_fraction(sigma);
        const FrenetSample a = detail::frenet_no_arclength(wavy, t_orig);
        const FrenetSample b = detail::frenet_no_arclength(rep, sigma);
        CHECK((a.position - b.position).norm() < 1e-9);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-8 * (1.0 + a.kappa));
        CHECK(std::abs(a.tau - b.tau) < 1e-8 * (1.0 + std::abs(a.tau)));
        CHECK(std::abs(a.eta - b.eta) < 1e-8 * (1.0 + std::abs(a.eta)));
    }
}

TEST_CASE("degenerate curve is rejected") {
    // A curve whose speed vanishes at t = 1/2.
    const CurveSpec pinched = fit_curve(
        [](double t) {
            const double u = t - 0.5;
            return Vec3(u * u * u, 0.3 * u * u, 0.0);
        },
        BasisKind::chebyshev_open, 8);
    CHECK_THROWS_AS(reparameterize_arclength(pinched, 32), degenerate_curve_error);
}

TEST_CASE("normalization produces a unit-length uniform-speed curve") {
    const CurveSpec ell = make_ellipse(1.4);
    const CurveSpec unit = normalize_to_unit_length(ell);
    CHECK(std::abs(curve_length(unit) - 1.0) < 1e-10);
    ConstraintSet cs;
    cs.unit_speed_tol = 1e-6;
    const ConstraintReport report = constraint_report(unit, cs, 256);
    CHECK(report.speed_ok);
}

TEST_CASE("constraint report flags the curvature floor") {
    const CurveSpec circle = make_circle(); // unit length, normalized kappa = 2 pi
    ConstraintSet cs;
    cs.kappa_min = 0.5;
    ConstraintReport r = constraint_report(circle, cs, 64);
    CHECK(r.kappa_ok);
    CHECK(std::abs(r.min_kappa - 2.0 * M_PI) < 1e-10);

    cs.kappa_min = 10.0;
    r = constraint_report(circle, cs, 64);
    CHECK_FALSE(r.kappa_ok);
    CHECK(std::abs(r.min_kappa - 2.0 * M_PI) < 1e-10);
}

TEST_CASE("clamped interpolant meets its end data") {
    BoundaryData bd;
    bd.start = {Vec3(0.0, 0.0, 0.0), Vec3(1.0, 0.0, 0.0)};
    bd.end = {Vec3(0.7, 0.25, 0.2), Vec3(0.6, 0.64, 0.48).normalized()};
    const CurveSpec curve = make_clamped_hermite(bd);
    ConstraintSet cs;
    cs.bc_mode = BcMode::clamped;
    const ConstraintReport r = constraint_report(curve, cs, 64);
    CHECK(r.bc_position_residual_start < 1e-10);
    CHECK(r.bc_position_residual_end < 1e-10);
    CHECK(r.bc_tangent_residual_start < 1e-10);
    CHECK(r.bc_tangent_residual_end < 1e-10);
    CHECK(r.bc_ok);
}
