#pragma once

#include "ribbonlim/curve.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/frenet.hpp"
#include "ribbonlim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ribbonlim {

// Cumulative arclength s(t) and its monotone inverse, built from per-panel
// Gauss-Legendre sums. Inversion is Newton on s(t) - target with a bisection
// fallback, so t(sigma) is resolved to near machine precision.
class ArclengthMap {
public:
    ArclengthMap(const CurveSpec& curve, int panels, int order = 16)
        : curve_(curve), order_(order) {
        panels = std::max(panels, 8);
        boundaries_.resize(panels + 1);
        cumulative_.resize(panels + 1);
        cumulative_[0] = 0.0;
        for (int p = 0; p <= panels; ++p) boundaries_[p] = static_cast<double>(p) / panels;
        for (int p = 0; p < panels; ++p) {
            const double len = integrate_panel([&](double u) { return speed(u); },
                                               boundaries_[p], boundaries_[p + 1], order_);
            if (len <= 0.0) throw degenerate_curve_error(0.5 * (boundaries_[p] + boundaries_[p + 1]));
            cumulative_[p + 1] = cumulative_[p] + len;
        }
    }

    double total_length() const { return cumulative_.back(); }

    double s_of_t(double t) const {
        t = std::clamp(t, 0.0, 1.0);
        const int p = panel_of(t);
        return cumulative_[p] +
               integrate_panel([&](double u) { return speed(u); }, boundaries_[p], t, order_);
    }

    // t such that s(t) = sigma * total_length, sigma in [0, 1].
    double t_of_fraction(double sigma) const {
        sigma = std::clamp(sigma, 0.0, 1.0);
        const double target = sigma * total_length();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        int p = static_cast<int>(std::distance(cumulative_.begin(), it)) - 1;
        p = std::clamp(p, 0, static_cast<int>(boundaries_.size()) - 2);
        double lo = boundaries_[p], hi = boundaries_[p + 1];
        double t = lo + (hi - lo) * (target - cumulative_[p]) /
                            std::max(cumulative_[p + 1] - cumulative_[p], 1e-300);
        for (int iter = 0; iter < 60; ++iter) {
            const double err = s_of_t(t) - target;
            if (err > 0.0)
                hi = t;
            else
                lo = t;
            const double step = err / std::max(speed(t), 1e-300);
            double next = t - step;
            if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
            if (std::abs(next - t) < 1e-16 && std::abs(err) < 1e-13 * (1.0 + total_length()))
                return next;
            t = next;
        }
        return t;
    }

private:
    double speed(double t) const { return curve_.evaluate_derivatives(t).d1.norm(); }

    int panel_of(double t) const {
        const int n = static_cast<int>(boundaries_.size()) - 1;
        int p = static_cast<int>(t * n);
        return std::clamp(p, 0, n - 1);
    }

    CurveSpec curve_;
    int order_;
    std::vector<double> boundaries_;
    std::vector<double> cumulative_;
};

// Refit the curve so the parameter is proportional to arclength: the output
// speed is constant (equal to the total length) within `speed_tol` in sup-norm
// over a dense check grid, and the length is preserved to 1e-10 relative.
// The refit stays in the original basis so derivatives remain analytic; the
// coefficient count escalates until the tolerance is met.
inline CurveSpec reparameterize_arclength(const CurveSpec& curve, int samples,
                                          double speed_tol = 1e-9) {
    const ArclengthMap map(curve, samples);
    const double length = map.total_length();
    auto resampled = [&](double sigma) { return curve.evaluate_derivatives(map.t_of_fraction(sigma)).position; };

    int n = std::max(curve.coefficient_count(), 32);
    const int n_max = 1024;
    while (true) {
        CurveSpec candidate =
            fit_curve(resampled, curve.basis_kind(), n, curve.boundary_data(), curve.target_length());
        // Check the speed profile on a dense grid.
        const int grid = std::max(4 * n, 512);
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i <= grid; ++i) {
            const double speed = candidate.evaluate_derivatives(static_cast<double>(i) / grid).d1.norm();
            worst = std::max(worst, std::abs(speed / length - 1.0));
            if (worst > speed_tol) {
                ok = false;
                break;
            }
        }
        if (ok) {
            const double new_length = curve_length(candidate, std::max(samples, 32));
            if (std::abs(new_length - length) > 1e-10 * length && n < n_max) {
                n = std::min(2 * n, n_max);
                continue;
            }
            return candidate;
        }
        if (n >= n_max)
            throw std::runtime_error("arclength refit did not reach the speed tolerance");
        n = std::min(2 * n, n_max);
    }
}

// Arclength parameterization followed by uniform scaling to unit length, the
// u(s) = r(l s)/l normalization. Boundary positions scale with the curve.
inline CurveSpec normalize_to_unit_length(const CurveSpec& curve, int samples = 64,
                                          double speed_tol = 1e-9) {
    CurveSpec uniform = reparameterize_arclength(curve, samples, speed_tol);
    const double length = curve_length(uniform);
    Eigen::Matrix3Xd coeffs = uniform.coefficients() / length;
    std::optional<BoundaryData> boundary = uniform.boundary_data();
    if (boundary) {
        boundary->start.position /= length;
        boundary->end.position /= length;
    }
    return CurveSpec(uniform.basis_kind(), std::move(coeffs), std::move(boundary), 1.0);
}

} // namespace ribbonlim
