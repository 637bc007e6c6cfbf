#pragma once

#include "ribbonlim/curve.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/quadrature.hpp"

#include <cmath>

namespace ribbonlim {

// Default floor below which curvature counts as numerically zero. eta = tau/kappa
// is undefined there and the admissible spaces exclude it.
inline constexpr double kappa_floor_eval = 1e-10;

// Pointwise Frenet-level data of a curve at parameter t. kappa and tau use the
// general-parameter formulas; eta_prime is the derivative of eta = tau/kappa
// with respect to arclength, obtained analytically (needs d4). For unit-speed
// curves everything reduces to the arclength expressions
//   kappa = |u''|,  tau = u'.(u'' x u''') / |u''|^2.
struct FrenetSample {
    double t_param = 0.0;
    double arclength_s = 0.0;
    Vec3 position = Vec3::Zero();
    Vec3 d1 = Vec3::Zero();
    Vec3 d2 = Vec3::Zero();
    Vec3 d3 = Vec3::Zero();
    Vec3 d4 = Vec3::Zero();
    double speed = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double eta = 0.0;
    double eta_prime = 0.0;
};

namespace detail {

// Frenet data without the arclength coordinate (set to 0); the hot path for
// quadrature loops, which track arclength themselves.
inline FrenetSample frenet_no_arclength(const CurveSpec& curve, double t,
                                        double kappa_floor = kappa_floor_eval) {
    const CurveJet jet = curve.evaluate_derivatives(t);
    FrenetSample out;
    out.t_param = t;
    out.position = jet.position;
    out.d1 = jet.d1;
    out.d2 = jet.d2;
    out.d3 = jet.d3;
    out.d4 = jet.d4;

    const double v = jet.d1.norm();
    if (v < 1e-14) throw degenerate_curve_error(t);
    out.speed = v;

    const Vec3 cross12 = jet.d1.cross(jet.d2);
    const double w = cross12.norm();
    const double v2 = v * v;
    const double v3 = v2 * v;
    out.kappa = w / v3;
    if (out.kappa < kappa_floor) throw inflection_error(t);

    const double w2 = w * w;
    const double triple = jet.d1.dot(jet.d2.cross(jet.d3));
    out.tau = triple / w2;
    out.eta = out.tau / out.kappa;

    // d(eta)/dt for eta = P v^3 / w^3 with P = c'.(c'' x c'''), v = |c'|,
    // w = |c' x c''|:
    //   P' = c'.(c'' x c''''),  v' = (c'.c'')/v,  w' = (c' x c'').(c' x c''')/w.
    const double p_prime = jet.d1.dot(jet.d2.cross(jet.d4));
    const double v_prime = jet.d1.dot(jet.d2) / v;
    const double w_prime = cross12.dot(jet.d1.cross(jet.d3)) / w;
    const double w3 = w2 * w;
    const double deta_dt =
        (p_prime * v3 + 3.0 * triple * v2 * v_prime) / w3 - 3.0 * triple * v3 * w_prime / (w3 * w);
    out.eta_prime = deta_dt / v;
    return out;
}

} // namespace detail

// Arclength from 0 to t by composite Gauss-Legendre quadrature of |c'|.
inline double arclength_at(const CurveSpec& curve, double t, int panels = 8, int order = 16) {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    const double width = t / panels;
    for (int p = 0; p < panels; ++p) {
        s += integrate_panel(
            [&](double u) { return curve.evaluate_derivatives(u).d1.norm(); }, p * width,
            (p + 1) * width, order);
    }
    return s;
}

// Total length of the curve over [0, 1].
inline double curve_length(const CurveSpec& curve, int panels = 32, int order = 16) {
    return arclength_at(curve, 1.0, panels, order);
}

inline FrenetSample frenet_sample(const CurveSpec& curve, double t,
                                  double kappa_floor = kappa_floor_eval) {
    FrenetSample out = detail::frenet_no_arclength(curve, t, kappa_floor);
    out.arclength_s = arclength_at(curve, t);
    return out;
}

} // namespace ribbonlim
