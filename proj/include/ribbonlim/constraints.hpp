#pragma once

#include "ribbonlim/curve.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ribbonlim {

enum class BcMode { clamped, free, periodic };

// Soft-constraint description of the admissible curve spaces: curvature floor
// kappa_m (0 disables), allowed deviation from uniform speed, and the kind of
// end conditions.
struct ConstraintSet {
    double kappa_min = 0.0;
    double unit_speed_tol = 1e-6;
    BcMode bc_mode = BcMode::free;

    void validate() const {
        if (kappa_min < 0.0) throw std::invalid_argument("kappa_min must be >= 0");
        if (unit_speed_tol <= 0.0 || unit_speed_tol > 1e-3)
            throw std::invalid_argument("unit_speed_tol must be in (0, 1e-3]");
    }
};

// Grid diagnostics for membership in the constrained spaces. Curvature is
// reported for the length-normalized curve (the paper's dimensionless kappa),
// speed as the deviation of |c'| from the constant profile.
struct ConstraintReport {
    double max_speed_deviation = 0.0;
    double min_kappa = std::numeric_limits<double>::infinity();
    double bc_position_residual_start = 0.0;
    double bc_tangent_residual_start = 0.0;
    double bc_position_residual_end = 0.0;
    double bc_tangent_residual_end = 0.0;
    bool speed_ok = false;
    bool kappa_ok = false;
    bool bc_ok = false;
};

inline ConstraintReport constraint_report(const CurveSpec& curve, const ConstraintSet& constraints,
                                          int grid) {
    constraints.validate();
    if (grid < 16) throw std::invalid_argument("constraint grid must be >= 16");

    ConstraintReport report;
    const double length = curve_length(curve);
    for (int i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        const CurveJet jet = curve.evaluate_derivatives(t);
        const double speed = jet.d1.norm();
        report.max_speed_deviation =
            std::max(report.max_speed_deviation, std::abs(speed / length - 1.0));
        const double kappa = jet.d1.cross(jet.d2).norm() / std::pow(speed, 3);
        report.min_kappa = std::min(report.min_kappa, length * kappa);
    }
    report.speed_ok = report.max_speed_deviation <= constraints.unit_speed_tol;
    report.kappa_ok = report.min_kappa >= constraints.kappa_min;

    report.bc_ok = true;
    if (constraints.bc_mode == BcMode::clamped) {
        if (!curve.boundary_data()) {
            report.bc_ok = false;
        } else {
            const BoundaryData& bd = *curve.boundary_data();
            const CurveJet at0 = curve.evaluate_derivatives(0.0);
            const CurveJet at1 = curve.evaluate_derivatives(1.0);
            report.bc_position_residual_start = (at0.position - bd.start.position).norm();
            report.bc_position_residual_end = (at1.position - bd.end.position).norm();
            report.bc_tangent_residual_start = (at0.d1.normalized() - bd.start.tangent).norm();
            report.bc_tangent_residual_end = (at1.d1.normalized() - bd.end.tangent).norm();
            const double tol = 1e-8;
            report.bc_ok = report.bc_position_residual_start <= tol &&
                           report.bc_position_residual_end <= tol &&
                           report.bc_tangent_residual_start <= tol &&
                           report.bc_tangent_residual_end <= tol;
        }
    } else if (constraints.bc_mode == BcMode::periodic) {
        report.bc_ok = curve.closure();
    }
    return report;
}

} // namespace ribbonlim
