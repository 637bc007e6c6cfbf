#include "ribbonlim/curves.hpp"
#include "ribbonlim/frenet.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace ribbonlim;

TEST_CASE("helix closed forms: kappa = a/(a^2+b^2), tau = b/(a^2+b^2)") {
    // a = b = 1 gives kappa = tau = 1/2, eta = 1, eta' = 0.
    const CurveSpec helix = make_unit_helix(0.5);
    for (double t : {0.08, 0.37, 0.5, 0.71, 0.93}) {
        const FrenetSample s = frenet_sample(helix, t);
        CHECK(std::abs(s.kappa - 0.5) < 1e-12);
        CHECK(std::abs(s.tau - 0.5) < 1e-12);
        CHECK(std::abs(s.eta - 1.0) < 1e-11);
        CHECK(std::abs(s.eta_prime) < 1e-9);
    }
    // General radius and pitch.
    const double a = 1.3, b = 0.6;
    const CurveSpec helix2 = make_helix(a, b, 2.2);
    const FrenetSample s2 = frenet_sample(helix2, 0.4);
    CHECK(std::abs(s2.kappa - a / (a * a + b * b)) < 1e-12);
    CHECK(std::abs(s2.tau - b / (a * a + b * b)) < 1e-12);
    CHECK(std::abs(s2.eta - b / a) < 1e-11);
}

TEST_CASE("planar circle: kappa = 1/R, tau = 0") {
    const double R = 2.7;
    const CurveSpec circle = make_circle(R);
    for (double t : {0.0, 0.2, 0.55, 0.9}) {
        const FrenetSample s = frenet_sample(circle, t);
        CHECK(std::abs(s.kappa - 1.0 / R) < 1e-13);
        CHECK(std::abs(s.tau) < 1e-13);
        CHECK(std::abs(s.eta) < 1e-13);
    }
}

TEST_CASE("straight line raises an inflection error") {
    const CurveSpec seg =
        fit_curve([](double t) { return Vec3(t, 0.5 * t, 0.0); }, BasisKind::chebyshev_open, 8);
    CHECK_THROWS_AS(frenet_sample(seg, 0.5), inflection_error);
    try {
        frenet_sample(seg, 0.5);
    } catch (const inflection_error& e) {
        CHECK(e.t() == 0.5);
    }
}

TEST_CASE("arclength coordinate matches dense trapezoid quadrature") {
    const CurveSpec wavy = make_wavy_circle(0.1, 2);
    const FrenetSample s = frenet_sample(wavy, 1.0);
    const double L = curve_length(wavy);
    CHECK(std::abs(s.arclength_s - L) < 1e-12 * L);
}

TEST_CASE("eta_prime is the arclength derivative of eta") {
    const CurveSpec wavy = make_wavy_circle(0.18, 3);
    for (int i = 1; i < 10; ++i) {
        const double t = i / 10.0;
        const double h = 1e-6;
        const FrenetSample mid = detail::frenet_no_arclength(wavy, t);
        const FrenetSample lo = detail::frenet_no_arclength(wavy, t - h);
        const FrenetSample hi = detail::frenet_no_arclength(wavy, t + h);
        const double fd = (hi.eta - lo.eta) / (2.0 * h) / mid.speed;
        CHECK(std::abs(mid.eta_prime - fd) < 1e-5 * (1.0 + std::abs(mid.eta_prime)));
    }
}

TEST_CASE("unit-speed curves satisfy the arclength formulas") {
    // The reparameterized wavy circle has |c'| constant = L; after scaling by
    // 1/L it is a unit-speed curve, where kappa = |u''| must hold.
    const CurveSpec wavy = make_wavy_circle(0.1, 2);
    const CurveSpec unit = normalize_to_unit_length(wavy);
    for (double t : {0.1, 0.35, 0.62, 0.88}) {
        const CurveJet jet = unit.evaluate_derivatives(t);
        const FrenetSample s = detail::frenet_no_arclength(unit, t);
        CHECK(std::abs(jet.d1.norm() - 1.0) < 1e-8);
        CHECK(std::abs(s.kappa - jet.d2.norm()) < 1e-6 * jet.d2.norm());
        const double tau_arclength = jet.d1.dot(jet.d2.cross(jet.d3)) / jet.d2.squaredNorm();
        CHECK(std::abs(s.tau - tau_arclength) < 1e-6 * (1.0 + std::abs(s.tau)));
    }
}
