#include "ribbonlim/curve.hpp"
#include "ribbonlim/curves.hpp"
#include "ribbonlim/frenet.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace ribbonlim;

TEST_CASE("fourier circle has exact trigonometric derivatives") {
    const CurveSpec circle = make_circle(1.0);
    const CurveJet jet = circle.evaluate_derivatives(0.0);
    const double w = 2.0 * M_PI;
    CHECK(jet.position.isApprox(Vec3(1.0, 0.0, 0.0), 1e-15));
    CHECK((jet.d1 - Vec3(0.0, w, 0.0)).norm() < 1e-13);
    CHECK((jet.d2 - Vec3(-w * w, 0.0, 0.0)).norm() < 1e-12);
    CHECK((jet.d3 - Vec3(0.0, -w * w * w, 0.0)).norm() < 1e-11);
    CHECK((jet.d4 - Vec3(w * w * w * w, 0.0, 0.0)).norm() < 1e-10);
}

TEST_CASE("chebyshev straight segment has vanishing higher derivatives") {
    const CurveSpec seg =
        fit_curve([](double t) { return Vec3(t, 0.0, 0.0); }, BasisKind::chebyshev_open, 8);
    for (double t : {0.0, 0.25, 0.61, 1.0}) {
        const CurveJet jet = seg.evaluate_derivatives(t);
        CHECK((jet.position - Vec3(t, 0.0, 0.0)).norm() < 1e-14);
        CHECK((jet.d1 - Vec3(1.0, 0.0, 0.0)).norm() < 1e-13);
        CHECK(jet.d2.norm() < 1e-12);
        CHECK(jet.d3.norm() < 1e-12);
        CHECK(jet.d4.norm() < 1e-12);
    }
}

TEST_CASE("fitted helix matches symbolic derivatives at 100 points") {
    const double a = 0.7, b = 0.4, omega = 3.1;
    const CurveSpec helix = make_helix(a, b, omega);
    for (int i = 0; i < 100; ++i) {
        const double t = (i + 0.5) / 100.0;
        const CurveJet jet = helix.evaluate_derivatives(t);
        const double c = std::cos(omega * t), s = std::sin(omega * t);
        const double w2 = omega * omega, w3 = w2 * omega, w4 = w3 * omega;
        CHECK((jet.position - Vec3(a * c, a * s, b * omega * t)).norm() < 1e-12);
        CHECK((jet.d1 - Vec3(-a * omega * s, a * omega * c, b * omega)).norm() < 1e-11);
        CHECK((jet.d2 - Vec3(-a * w2 * c, -a * w2 * s, 0.0)).norm() < 1e-10);
        CHECK((jet.d3 - Vec3(a * w3 * s, -a * w3 * c, 0.0)).norm() < 1e-9);
        CHECK((jet.d4 - Vec3(a * w4 * c, a * w4 * s, 0.0)).norm() < 1e-8);
        CHECK(std::abs(jet.d1.norm() - omega * std::sqrt(a * a + b * b)) < 1e-12);
    }
}

TEST_CASE("parameter outside the domain is rejected") {
    const CurveSpec circle = make_circle();
    CHECK_THROWS_AS(circle.evaluate_derivatives(-0.01), std::domain_error);
    CHECK_THROWS_AS(circle.evaluate_derivatives(1.01), std::domain_error);
}

TEST_CASE("constructor enforces the invariants") {
    CHECK_THROWS_AS(CurveSpec(BasisKind::fourier_closed, Eigen::Matrix3Xd::Zero(3, 5)),
                    std::invalid_argument);
    Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, 9);
    coeffs(0, 1) = 1.0;
    coeffs(1, 2) = 1.0;
    BoundaryData bad;
    bad.start.tangent = Vec3(1.0, 1.0, 0.0); // not unit
    CHECK_THROWS_AS(CurveSpec(BasisKind::chebyshev_open, coeffs, bad), std::invalid_argument);
}

TEST_CASE("derivatives agree with Richardson finite differences of position") {
    const CurveSpec wavy = make_wavy_circle(0.15, 3);
    const CurveSpec helix = make_helix(1.0, 0.5, 2.0);
    for (const CurveSpec* curve : {&wavy, &helix}) {
        for (int i = 0; i < 12; ++i) {
            const double t = 0.1 + 0.8 * i / 11.0;
            const CurveJet jet = curve->evaluate_derivatives(t);
            const Vec3 exact[4] = {jet.d1, jet.d2, jet.d3, jet.d4};
            const double h[4] = {1e-4, 1e-3, 4e-3, 8e-3};
            for (int order = 1; order <= 4; ++order) {
                const Vec3 fd = oracles::fd_derivative(*curve, t, order, h[order - 1]);
                const double rel =
                    (fd - exact[order - 1]).norm() / (1.0 + exact[order - 1].norm());
                CHECK(rel < 1e-7);
            }
        }
    }
}

TEST_CASE("rigid motions leave the Frenet scalars unchanged") {
    const CurveSpec wavy = make_wavy_circle(0.12, 2);
    const Eigen::Matrix3d rot = oracles::random_rotation(17);
    const CurveSpec moved = transform_curve(wavy, rot, Vec3(0.3, -1.2, 0.7));
    for (int i = 0; i < 40; ++i) {
        const double t = (i + 0.5) / 40.0;
        const FrenetSample a = detail::frenet_no_arclength(wavy, t);
        const FrenetSample b = detail::frenet_no_arclength(moved, t);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-10);
        CHECK(std::abs(a.tau - b.tau) < 1e-10);
        CHECK(std::abs(a.eta - b.eta) < 1e-10);
        CHECK(std::abs(a.eta_prime - b.eta_prime) < 1e-9);
    }
}

TEST_CASE("mirror reflection negates torsion and eta") {
    const CurveSpec wavy = make_wavy_circle(0.12, 2);
    Eigen::Matrix3d mirror = Eigen::Matrix3d::Identity();
    mirror(2, 2) = -1.0;
    const CurveSpec reflected = transform_curve(wavy, mirror);
    for (int i = 0; i < 40; ++i) {
        const double t = (i + 0.5) / 40.0;
        const FrenetSample a = detail::frenet_no_arclength(wavy, t);
        const FrenetSample b = detail::frenet_no_arclength(reflected, t);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-10);
        CHECK(std::abs(a.tau + b.tau) < 1e-10);
        CHECK(std::abs(a.eta + b.eta) < 1e-10);
    }
}

TEST_CASE("random smooth curves pass the derivative cross-check") {
    for (std::uint64_t seed : {11u, 23u, 101u}) {
        const CurveSpec curve = make_random_closed(seed);
        for (int i = 0; i < 8; ++i) {
            const double t = 0.1 + 0.8 * i / 7.0;
            const CurveJet jet = curve.evaluate_derivatives(t);
            const Vec3 fd = oracles::fd_derivative(curve, t, 2, 1e-3);
            CHECK((fd - jet.d2).norm() / (1.0 + jet.d2.norm()) < 1e-7);
        }
    }
}
