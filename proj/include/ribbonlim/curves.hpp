#pragma once

#include "ribbonlim/arclength.hpp"
#include "ribbonlim/curve.hpp"
#include "ribbonlim/frenet.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace ribbonlim {

// Circle of the given radius in the xy plane, exact in the trigonometric
// basis. radius = 1/(2 pi) gives the unit-length circle.
inline CurveSpec make_circle(double radius = 1.0 / (2.0 * M_PI), int coefficients = 9) {
    Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, std::max(coefficients, 8));
    coeffs(0, 1) = radius; // x: cos(2 pi t)
    coeffs(1, 2) = radius; // y: sin(2 pi t)
    return CurveSpec(BasisKind::fourier_closed, std::move(coeffs));
}

// Planar ellipse with semi-axes (ratio * r, r), exact in the basis.
inline CurveSpec make_ellipse(double ratio, double r = 1.0 / (2.0 * M_PI), int coefficients = 9) {
    Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, std::max(coefficients, 8));
    coeffs(0, 1) = ratio * r;
    coeffs(1, 2) = r;
    return CurveSpec(BasisKind::fourier_closed, std::move(coeffs));
}

// Open helix arc (a cos(w t), a sin(w t), b w t), t in [0, 1], fitted in the
// Chebyshev basis. Curvature a/(a^2+b^2) and torsion b/(a^2+b^2) are constant,
// so eta' vanishes identically.
inline CurveSpec make_helix(double a, double b, double omega, int coefficients = 48) {
    return fit_curve(
        [=](double t) {
            return Vec3(a * std::cos(omega * t), a * std::sin(omega * t), b * omega * t);
        },
        BasisKind::chebyshev_open, coefficients);
}

// Helix arc from the a = b = 1 family whose length-normalized radius is
// `scaled_radius`: the Sadowsky energy is exactly 1/scaled_radius^2.
inline CurveSpec make_unit_helix(double scaled_radius, int coefficients = 48) {
    if (scaled_radius <= 0.0) throw std::invalid_argument("scaled radius must be positive");
    const double omega = 1.0 / (scaled_radius * std::sqrt(2.0));
    return make_helix(1.0, 1.0, omega, coefficients);
}

// Closed circle with a z-modulation delta * sin(2 pi m t): nonconstant torsion,
// hence a nontrivial eta' profile. The workhorse torsion-modulated test curve.
inline CurveSpec make_wavy_circle(double delta, int m, int coefficients = 0) {
    if (m < 1) throw std::invalid_argument("harmonic index must be >= 1");
    const int needed = 2 * m + 1;
    const int n = std::max({coefficients, needed, 9});
    Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, n);
    coeffs(0, 1) = 1.0;
    coeffs(1, 2) = 1.0;
    coeffs(2, 2 * m) = delta;
    return CurveSpec(BasisKind::fourier_closed, std::move(coeffs));
}

// Clamped Hermite-type arc between end conditions, fitted in the Chebyshev
// basis with the cubic interpolant of positions and end derivatives
// scale * tangent. Starting point for clamped minimizations.
inline CurveSpec make_clamped_hermite(const BoundaryData& boundary, double derivative_scale = 1.0,
                                      int coefficients = 16) {
    const Vec3 p0 = boundary.start.position;
    const Vec3 p1 = boundary.end.position;
    const Vec3 m0 = derivative_scale * boundary.start.tangent;
    const Vec3 m1 = derivative_scale * boundary.end.tangent;
    return fit_curve(
        [&](double t) {
            const double t2 = t * t, t3 = t2 * t;
            return Vec3((2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 +
                        (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1);
        },
        BasisKind::chebyshev_open, coefficients, boundary);
}

// Randomized closed curve: circle plus seeded harmonics with 1/j^3 amplitude
// decay, resampled until the normalized curvature stays above 0.1 on a dense
// grid. Deterministic for a fixed seed.
inline CurveSpec make_random_closed(std::uint64_t seed, int harmonics = 4) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const int n = std::max(2 * harmonics + 1, 9);
        Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, n);
        coeffs(0, 1) = 1.0;
        coeffs(1, 2) = 1.0;
        for (int j = 2; j <= harmonics; ++j) {
            const double scale = 0.12 / (j * j * j);
            for (int c = 0; c < 3; ++c) {
                coeffs(c, 2 * j - 1) += scale * normal(rng);
                coeffs(c, 2 * j) += scale * normal(rng);
            }
        }
        // Mild z-wobble so torsion is generically nonzero.
        coeffs(2, 2) += 0.05 * normal(rng);
        CurveSpec candidate(BasisKind::fourier_closed, std::move(coeffs));
        const double length = curve_length(candidate);
        bool admissible = true;
        for (int i = 0; i < 512 && admissible; ++i) {
            const double t = (i + 0.5) / 512.0;
            const CurveJet jet = candidate.evaluate_derivatives(t);
            const double speed = jet.d1.norm();
            const double kappa = jet.d1.cross(jet.d2).norm() / (speed * speed * speed);
            if (length * kappa < 0.1) admissible = false;
        }
        if (admissible) return candidate;
    }
    throw std::runtime_error("failed to draw an admissible random curve");
}

// Largest |eta'| on the length-normalized curve, located by a dense scan plus
// golden-section refinement. Used to place blowup thresholds at 2/M.
inline double max_abs_eta_prime(const CurveSpec& curve, int grid = 4096) {
    const double length = curve_length(curve);
    auto value = [&](double t) {
        return std::abs(length * detail::frenet_no_arclength(curve, t).eta_prime);
    };
    double best = 0.0, best_t = 0.5;
    for (int i = 0; i < grid; ++i) {
        const double t = (i + 0.5) / grid;
        const double v = value(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double lo = std::max(0.0, best_t - 2.0 / grid);
    double hi = std::min(1.0, best_t + 2.0 / grid);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = value(x1);
        }
        if (hi - lo < 1e-13) break;
    }
    return std::max(best, std::max(f1, f2));
}

} // namespace ribbonlim
