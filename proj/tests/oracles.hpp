#pragma once

// Test-only oracles, independent of the library's evaluation paths: finite
// differences of positions, quadrature-from-scratch, root counting for set
// measures, and a dense grid search used to confirm minimization basins.

#include "ribbonlim/ribbonlim.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

using ribbonlim::CurveSpec;
using ribbonlim::Vec3;

// Richardson-extrapolated central differences of the position for derivative
// orders 1..4. Stencils are applied at two step sizes and combined to cancel
// the h^2 term.
inline Vec3 fd_derivative(const CurveSpec& curve, double t, int order, double h) {
    auto p = [&](double u) { return curve.evaluate_derivatives(u).position; };
    auto stencil = [&](double hh) -> Vec3 {
        switch (order) {
            case 1:
                return (p(t + hh) - p(t - hh)) / (2.0 * hh);
            case 2:
                return (p(t + hh) - 2.0 * p(t) + p(t - hh)) / (hh * hh);
            case 3:
                return (p(t + 2.0 * hh) - 2.0 * p(t + hh) + 2.0 * p(t - hh) - p(t - 2.0 * hh)) /
                       (2.0 * hh * hh * hh);
            case 4:
                return (p(t + 2.0 * hh) - 4.0 * p(t + hh) + 6.0 * p(t) - 4.0 * p(t - hh) +
                        p(t - 2.0 * hh)) /
                       (hh * hh * hh * hh);
            default:
                throw std::logic_error("order out of range");
        }
    };
    const Vec3 coarse = stencil(h);
    const Vec3 fine = stencil(0.5 * h);
    return (4.0 * fine - coarse) / 3.0; // cancel the h^2 error term
}

// Independent arclength by dense trapezoid quadrature.
inline double trapezoid_length(const CurveSpec& curve, int n = 200000) {
    double sum = 0.0;
    double prev = curve.evaluate_derivatives(0.0).d1.norm();
    for (int i = 1; i <= n; ++i) {
        const double cur = curve.evaluate_derivatives(static_cast<double>(i) / n).d1.norm();
        sum += 0.5 * (prev + cur) / n;
        prev = cur;
    }
    return sum;
}

// Measure of {t : |eta'_normalized(t)| >= threshold} by bisection on the
// boundary crossings of a dense scan.
inline double superlevel_measure(const CurveSpec& curve, double threshold, int grid = 8192) {
    const double length = ribbonlim::curve_length(curve);
    auto value = [&](double t) {
        return std::abs(length * ribbonlim::detail::frenet_no_arclength(curve, t).eta_prime) -
               threshold;
    };
    auto crossing = [&](double lo, double hi) {
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if ((value(lo) > 0.0) == (value(mid) > 0.0))
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double measure = 0.0;
    double prev_t = 0.0;
    bool prev_above = value(0.0) > 0.0;
    double segment_start = prev_above ? 0.0 : -1.0;
    for (int i = 1; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        const bool above = value(t) > 0.0;
        if (above != prev_above) {
            const double c = crossing(prev_t, t);
            if (above) {
                segment_start = c;
            } else {
                measure += c - segment_start;
                segment_start = -1.0;
            }
        }
        prev_t = t;
        prev_above = above;
    }
    if (segment_start >= 0.0) measure += 1.0 - segment_start;
    return measure;
}

// Dense grid search over a three-mode closed-curve family around the circle:
//   x = cos h + a cos 2h,  y = sin h + b sin 2h,  z = c sin h.
// Returns the smallest Sadowsky energy over the grid; the basin check for the
// closed-curve minimization.
inline double grid_search_min_energy(int steps, double radius,
                                     const ribbonlim::QuadratureScheme& quad,
                                     double* best_a = nullptr, double* best_b = nullptr,
                                     double* best_c = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (int ia = 0; ia <= steps; ++ia) {
        const double a = -radius + 2.0 * radius * ia / steps;
        for (int ib = 0; ib <= steps; ++ib) {
            const double b = -radius + 2.0 * radius * ib / steps;
            for (int ic = 0; ic <= steps; ++ic) {
                const double c = -radius + 2.0 * radius * ic / steps;
                Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, 9);
                coeffs(0, 1) = 1.0;
                coeffs(1, 2) = 1.0;
                coeffs(0, 3) = a;
                coeffs(1, 4) = b;
                coeffs(2, 2) = c;
                const CurveSpec curve(ribbonlim::BasisKind::fourier_closed, std::move(coeffs));
                double f;
                try {
                    f = ribbonlim::sadowsky_energy(curve, quad).value();
                } catch (const ribbonlim::inflection_error&) {
                    continue;
                }
                if (f < best) {
                    best = f;
                    if (best_a) *best_a = a;
                    if (best_b) *best_b = b;
                    if (best_c) *best_c = c;
                }
            }
        }
    }
    return best;
}

// Seeded random proper rotation.
inline Eigen::Matrix3d random_rotation(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(m);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return q;
}

} // namespace oracles
