#pragma once

#include "ribbonlim/constraints.hpp"
#include "ribbonlim/curve.hpp"
#include "ribbonlim/energy.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/parallel.hpp"
#include "ribbonlim/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ribbonlim {

enum class EnergyKind { sadowsky, wunderlich, regularized };

// Penalty formulation of the constrained minimization: energy plus soft
// unit-speed and unit-length terms, plus an optional log barrier keeping the
// normalized curvature above kappa_m. Defaults meet the residual targets
// (speed 1e-4, length 1e-6) on the test problems.
struct ObjectiveConfig {
    EnergyKind energy_kind = EnergyKind::sadowsky;
    double eps = 0.0;      // wunderlich
    double kappa_m = 0.0;  // regularized branch point and barrier reference
    double penalty_speed = 1e4;
    double penalty_length = 1e6;
    double barrier_kappa = 0.0;
    QuadratureScheme quad{16, 8};
    int diag_grid = 1024;

    void validate() const {
        if (penalty_speed < 0.0 || penalty_length < 0.0 || barrier_kappa < 0.0)
            throw std::invalid_argument("penalty weights must be nonnegative");
        if (energy_kind == EnergyKind::wunderlich && eps < 0.0)
            throw std::invalid_argument("eps must be >= 0");
        if (energy_kind == EnergyKind::regularized && kappa_m <= 0.0)
            throw std::invalid_argument("regularized energy needs kappa_m > 0");
        if (barrier_kappa > 0.0 && kappa_m <= 0.0)
            throw std::invalid_argument("barrier needs kappa_m > 0");
        quad.validate();
    }
};

struct HistoryEntry {
    int iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
};

struct SolveReport {
    EnergyValue final_energy = EnergyValue::finite(0.0);
    double final_objective = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;
    double speed_residual = 0.0;
    double length_residual = 0.0;
    double bc_residual = 0.0;
    double kappa_min_residual = 0.0;
    bool converged = false;
    std::string status;
    std::vector<HistoryEntry> history;
};

// Line search could not find a decreasing step.
class no_descent_error : public std::runtime_error {
public:
    explicit no_descent_error(SolveReport report)
        : std::runtime_error("line search failed to decrease the objective"),
          report_(std::move(report)) {}

    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

namespace detail {

inline EnergyValue evaluate_energy(const CurveSpec& curve, const ObjectiveConfig& cfg) {
    switch (cfg.energy_kind) {
        case EnergyKind::sadowsky:
            return sadowsky_energy(curve, cfg.quad);
        case EnergyKind::wunderlich:
            return wunderlich_energy(curve, cfg.eps, cfg.quad, cfg.diag_grid);
        case EnergyKind::regularized:
            return regularized_sadowsky_energy(curve, cfg.kappa_m, cfg.quad);
    }
    throw std::logic_error("unknown energy kind");
}

} // namespace detail

// Extended-real objective: +infinity propagates from the energy, from an
// inflection encountered at a node (unless the energy is the regularized
// one), and from barrier infeasibility.
inline double objective(const CurveSpec& curve, const ObjectiveConfig& cfg) {
    cfg.validate();
    constexpr double inf = std::numeric_limits<double>::infinity();

    double energy;
    try {
        energy = detail::evaluate_energy(curve, cfg).as_double();
    } catch (const inflection_error&) {
        return inf;
    }
    if (!std::isfinite(energy)) return inf;

    const std::vector<QuadratureNode> nodes = scheme_nodes(cfg.quad);
    double length = 0.0;
    std::vector<double> speeds(nodes.size());
    std::vector<double> kappas(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const CurveJet jet = curve.evaluate_derivatives(nodes[i].t);
        speeds[i] = jet.d1.norm();
        if (speeds[i] < 1e-14) return inf;
        kappas[i] = jet.d1.cross(jet.d2).norm() / (speeds[i] * speeds[i] * speeds[i]);
        length += nodes[i].weight * speeds[i];
    }

    double penalty = cfg.penalty_length * (length - 1.0) * (length - 1.0);
    if (cfg.penalty_speed > 0.0) {
        double speed_term = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double dev = speeds[i] / length - 1.0;
            speed_term += nodes[i].weight * dev * dev;
        }
        penalty += cfg.penalty_speed * speed_term;
    }
    if (cfg.barrier_kappa > 0.0) {
        double barrier = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double margin = length * kappas[i] - cfg.kappa_m;
            if (margin <= 0.0) return inf;
            barrier -= nodes[i].weight * std::log(margin);
        }
        penalty += cfg.barrier_kappa * barrier;
    }
    return energy + penalty;
}

namespace detail {

inline CurveSpec curve_from_flat(const CurveSpec& proto, const Eigen::VectorXd& x) {
    Eigen::Matrix3Xd coeffs(3, proto.coefficient_count());
    for (int k = 0; k < proto.coefficient_count(); ++k)
        for (int c = 0; c < 3; ++c) coeffs(c, k) = x[3 * k + c];
    return proto.with_coefficients(std::move(coeffs));
}

inline Eigen::VectorXd flat_from_curve(const CurveSpec& curve) {
    Eigen::VectorXd x(3 * curve.coefficient_count());
    for (int k = 0; k < curve.coefficient_count(); ++k)
        for (int c = 0; c < 3; ++c) x[3 * k + c] = curve.coefficients()(c, k);
    return x;
}

// Orthogonal projector onto the null space of the clamped-end constraints
// c(0), c(1), c'(0), c'(1): identical per spatial component, so built once
// on the per-component coefficient space and applied blockwise.
inline Eigen::MatrixXd clamped_projector(const CurveSpec& curve) {
    const int n = curve.coefficient_count();
    Eigen::MatrixXd constraints(4, n);
    for (int k = 0; k < n; ++k) {
        double row0[5], row1[5];
        CurveSpec::basis_row(curve.basis_kind(), k, 0.0, row0);
        CurveSpec::basis_row(curve.basis_kind(), k, 1.0, row1);
        constraints(0, k) = row0[0];
        constraints(1, k) = row1[0];
        constraints(2, k) = row0[1];
        constraints(3, k) = row1[1];
    }
    const Eigen::MatrixXd gram = constraints * constraints.transpose();
    return Eigen::MatrixXd::Identity(n, n) -
           constraints.transpose() * gram.ldlt().solve(constraints);
}

inline void apply_componentwise(const Eigen::MatrixXd& projector, Eigen::VectorXd& v) {
    const int n = static_cast<int>(projector.rows());
    for (int c = 0; c < 3; ++c) {
        Eigen::VectorXd comp(n);
        for (int k = 0; k < n; ++k) comp[k] = v[3 * k + c];
        comp = projector * comp;
        for (int k = 0; k < n; ++k) v[3 * k + c] = comp[k];
    }
}

} // namespace detail

// Central finite differences over the flat coefficient vector with step
// h = 1e-6 (1 + |coef|). Components are independent objective evaluations and
// run in parallel into fixed slots, so the result is deterministic.
inline Eigen::VectorXd gradient(const CurveSpec& curve, const ObjectiveConfig& cfg) {
    const Eigen::VectorXd x = detail::flat_from_curve(curve);
    Eigen::VectorXd grad(x.size());
    std::vector<int> blocked(x.size(), 0);
    parallel_for(static_cast<int>(x.size()), [&](int i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fp = objective(detail::curve_from_flat(curve, xp), cfg);
        const double fm = objective(detail::curve_from_flat(curve, xm), cfg);
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            blocked[i] = 1;
            grad[i] = 0.0;
            return;
        }
        grad[i] = (fp - fm) / (2.0 * h);
    });
    for (int i = 0; i < static_cast<int>(x.size()); ++i)
        if (blocked[i]) throw gradient_blocked_error(i);
    return grad;
}

// Quasi-Newton minimization over curve coefficients: BFGS inverse-Hessian
// updates, Armijo backtracking (infinite objectives count as failed
// decrease), and, for clamped Chebyshev curves, projection of gradients and
// steps onto the subspace holding both end positions and end derivative
// vectors fixed.
inline std::pair<CurveSpec, SolveReport> minimize(const CurveSpec& curve0,
                                                  const ObjectiveConfig& cfg, int max_iter = 200,
                                                  double tol_grad = 1e-6,
                                                  double tol_rel_energy = 1e-12) {
    cfg.validate();
    const bool clamp = curve0.basis_kind() == BasisKind::chebyshev_open &&
                       curve0.boundary_data().has_value();
    Eigen::MatrixXd projector;
    if (clamp) projector = detail::clamped_projector(curve0);

    Eigen::VectorXd x = detail::flat_from_curve(curve0);
    const int dim = static_cast<int>(x.size());

    double f = objective(curve0, cfg);
    if (!std::isfinite(f))
        throw std::domain_error("objective is infinite at the starting curve");

    auto project = [&](Eigen::VectorXd& v) {
        if (clamp) detail::apply_componentwise(projector, v);
    };

    Eigen::VectorXd g = gradient(detail::curve_from_flat(curve0, x), cfg);
    project(g);

    Eigen::MatrixXd hessian_inv = Eigen::MatrixXd::Identity(dim, dim);
    SolveReport report;
    report.history.push_back({0, f, g.norm()});

    int stall_count = 0;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double gnorm = g.norm();
        if (gnorm <= tol_grad) {
            report.converged = true;
            report.status = "gradient tolerance reached";
            break;
        }

        Eigen::VectorXd direction = -(hessian_inv * g);
        project(direction);
        double slope = g.dot(direction);
        if (slope >= 0.0) {
            direction = -g; // reset on a non-descent quasi-Newton step
            hessian_inv.setIdentity();
            slope = g.dot(direction);
        }

        double step = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + step * direction;
            f_new = objective(detail::curve_from_flat(curve0, x_new), cfg);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            report.iterations = iter;
            report.grad_norm = gnorm;
            report.final_objective = f;
            report.status = "line search failed";
            throw no_descent_error(report);
        }

        Eigen::VectorXd g_new = gradient(detail::curve_from_flat(curve0, x_new), cfg);
        project(g_new);

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = hessian_inv * y;
            hessian_inv += (sy + y.dot(hy)) * rho * rho * (s * s.transpose()) -
                           rho * (hy * s.transpose() + s * hy.transpose());
        }

        const double rel_change = std::abs(f - f_new) / std::max(1.0, std::abs(f));
        stall_count = rel_change <= tol_rel_energy ? stall_count + 1 : 0;

        x = x_new;
        f = f_new;
        g = g_new;
        report.history.push_back({iter + 1, f, g.norm()});

        if (stall_count >= 5) {
            report.converged = true;
            report.status = "energy change below tolerance";
            ++iter;
            break;
        }
    }
    if (report.status.empty()) report.status = "max iterations reached";

    CurveSpec final_curve = detail::curve_from_flat(curve0, x);
    report.iterations = iter;
    report.grad_norm = g.norm();
    report.final_objective = f;
    try {
        report.final_energy = detail::evaluate_energy(final_curve, cfg);
    } catch (const inflection_error&) {
        report.final_energy = EnergyValue::infinite({1.0, 0.0});
    }

    ConstraintSet constraints;
    constraints.kappa_min = cfg.kappa_m;
    constraints.unit_speed_tol = 1e-3;
    constraints.bc_mode = clamp ? BcMode::clamped
                                : (curve0.closure() ? BcMode::periodic : BcMode::free);
    const ConstraintReport cr = constraint_report(final_curve, constraints, 256);
    report.speed_residual = cr.max_speed_deviation;
    report.length_residual = std::abs(curve_length(final_curve) - 1.0);
    report.bc_residual = std::max({cr.bc_position_residual_start, cr.bc_position_residual_end,
                                   cr.bc_tangent_residual_start, cr.bc_tangent_residual_end});
    report.kappa_min_residual = std::max(0.0, cfg.kappa_m - cr.min_kappa);
    return {std::move(final_curve), std::move(report)};
}

} // namespace ribbonlim
