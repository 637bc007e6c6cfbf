#pragma once

#include "ribbonlim/curve.hpp"
#include "ribbonlim/curves.hpp"
#include "ribbonlim/energy.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ribbonlim {

// Result of evaluating F_eps across an eps grid against the Sadowsky limit.
// `monotone` refers to the finite entries ordered by eps; the rate and
// prefactor come from a log-log least-squares fit of F_eps - F_limit on the
// smallest finite entries and are absent when fewer than four positive gaps
// exist (for example on curves with eta' identically zero).
struct SweepReport {
    std::vector<double> eps_grid; // decreasing
    std::vector<EnergyValue> F_eps;
    double F_limit = 0.0;
    bool monotone = false;
    std::optional<double> fitted_rate;
    std::optional<double> fitted_prefactor;
    bool degenerate_fit = false;
};

inline SweepReport eps_sweep(const CurveSpec& curve, std::vector<double> eps_grid,
                             const QuadratureScheme& quad, int diag_grid = 4096) {
    if (eps_grid.empty()) throw std::invalid_argument("eps grid must not be empty");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (eps_grid[i] <= eps_grid[i + 1])
            throw std::invalid_argument("eps grid must be strictly decreasing");
    if (eps_grid.back() <= 0.0) throw std::invalid_argument("eps values must be positive");

    SweepReport report;
    report.eps_grid = std::move(eps_grid);
    report.F_limit = sadowsky_energy(curve, quad).value();
    report.F_eps.reserve(report.eps_grid.size());
    for (double eps : report.eps_grid)
        report.F_eps.push_back(wunderlich_energy(curve, eps, quad, diag_grid));

    report.monotone = true;
    for (std::size_t i = 0; i + 1 < report.F_eps.size(); ++i) {
        const bool fin_lo = report.F_eps[i + 1].is_finite(); // smaller eps
        const bool fin_hi = report.F_eps[i].is_finite();
        if (fin_hi && !fin_lo) report.monotone = false; // finite above an infinite entry
        if (!fin_hi || !fin_lo) continue;
        if (report.F_eps[i].value() < report.F_eps[i + 1].value()) report.monotone = false;
    }

    // Collect positive gaps from the small-eps end.
    std::vector<double> log_eps, log_gap;
    for (std::size_t i = report.F_eps.size(); i-- > 0;) {
        if (!report.F_eps[i].is_finite()) break;
        const double gap = report.F_eps[i].value() - report.F_limit;
        if (gap <= 1e-13 * (1.0 + report.F_limit)) continue; // below quadrature noise
        log_eps.push_back(std::log(report.eps_grid[i]));
        log_gap.push_back(std::log(gap));
    }
    if (log_eps.size() >= 4) {
        const double n = static_cast<double>(log_eps.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_eps.size(); ++i) {
            sx += log_eps[i];
            sy += log_gap[i];
            sxx += log_eps[i] * log_eps[i];
            sxy += log_eps[i] * log_gap[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / n;
        report.fitted_rate = slope;
        report.fitted_prefactor = std::exp(intercept);
    }
    report.degenerate_fit = !report.fitted_rate.has_value();
    return report;
}

enum class PerturbationKind { torsion_oscillation, coefficient_oscillation };

// Oscillatory perturbation schedule emulating a weakly but not strongly
// converging sequence: amplitudes decrease to zero while frequencies grow.
struct ProbeSequence {
    CurveSpec base;
    PerturbationKind kind = PerturbationKind::torsion_oscillation;
    std::vector<double> amplitudes;
    std::vector<int> frequencies;

    void validate() const {
        if (amplitudes.size() != frequencies.size())
            throw std::invalid_argument("amplitude and frequency schedules must have equal length");
        if (amplitudes.size() < 4) throw std::invalid_argument("schedules need length >= 4");
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if (amplitudes[i] < 0.0) throw std::invalid_argument("amplitudes must be nonnegative");
            if (i > 0 && amplitudes[i] > amplitudes[i - 1])
                throw std::invalid_argument("amplitudes must be nonincreasing");
            if (i > 0 && frequencies[i] < frequencies[i - 1])
                throw std::invalid_argument("frequencies must be nondecreasing");
        }
    }
};

// Default schedule with amplitude ~ f^-3: third derivatives oscillate with
// bounded amplitude (weak-not-strong behavior) while the curves converge
// uniformly with two derivatives. Also satisfies amplitude * frequency -> 0.
inline ProbeSequence make_probe_sequence(CurveSpec base, PerturbationKind kind, double amplitude0,
                                         int members = 6, int frequency0 = 4) {
    ProbeSequence seq{std::move(base), kind, {}, {}};
    for (int i = 0; i < members; ++i) {
        const int f = frequency0 * (1 << i);
        seq.frequencies.push_back(f);
        seq.amplitudes.push_back(amplitude0 * std::pow(static_cast<double>(frequency0) / f, 3));
    }
    return seq;
}

struct LscReport {
    std::vector<double> member_energies;
    double base_energy = 0.0;
    double liminf_estimate = 0.0;
    double margin = 0.0; // liminf F(u_n) - F(base)
    bool used_regularization = false;
};

namespace detail {

// Perturbed member curve: base + amplitude * oscillation(frequency). For
// closed curves the oscillation is the exact basis harmonic; for open ones it
// is windowed by (t(1-t))^2 to preserve clamped end data, then refitted.
inline CurveSpec probe_member(const ProbeSequence& seq, std::size_t index) {
    const double amp = seq.amplitudes[index];
    const int freq = seq.frequencies[index];
    const CurveSpec& base = seq.base;

    if (base.basis_kind() == BasisKind::fourier_closed) {
        const int needed = 2 * freq + 1;
        const int n = std::max(base.coefficient_count(), needed);
        Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, n);
        coeffs.leftCols(base.coefficient_count()) = base.coefficients();
        if (seq.kind == PerturbationKind::torsion_oscillation) {
            coeffs(2, 2 * freq) += amp; // z sin-harmonic modulates torsion
        } else {
            coeffs(0, 2 * freq - 1) += amp; // x cos-harmonic
        }
        return CurveSpec(BasisKind::fourier_closed, std::move(coeffs), base.boundary_data(),
                         base.target_length());
    }

    const int n = std::max(base.coefficient_count() + 8, 4 * freq + 32);
    const int component = seq.kind == PerturbationKind::torsion_oscillation ? 2 : 0;
    return fit_curve(
        [&](double t) {
            Vec3 p = base.evaluate_derivatives(t).position;
            const double window = t * (1.0 - t) * t * (1.0 - t);
            p[component] += amp * window * std::sin(2.0 * M_PI * freq * t);
            return p;
        },
        BasisKind::chebyshev_open, n, base.boundary_data(), base.target_length());
}

// kappa zeros of the length-normalized curve located by sign-structure of the
// local minimum: dense scan for dips below the threshold, then ternary
// refinement of each dip.
inline std::vector<double> locate_kappa_zeros(const CurveSpec& curve, double threshold = 1e-5,
                                              int grid = 2048) {
    const double length = curve_length(curve);
    auto kappa_at = [&](double t) {
        const CurveJet jet = curve.evaluate_derivatives(t);
        const double v = jet.d1.norm();
        return length * jet.d1.cross(jet.d2).norm() / (v * v * v);
    };
    std::vector<double> zeros;
    bool inside = false;
    double lo = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        const bool below = kappa_at(t) < threshold;
        if (below && !inside) {
            inside = true;
            lo = t;
        } else if (!below && inside) {
            inside = false;
            double a = std::max(0.0, lo - 1.0 / grid), b = t;
            for (int it = 0; it < 100; ++it) {
                const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                if (kappa_at(m1) < kappa_at(m2))
                    b = m2;
                else
                    a = m1;
            }
            zeros.push_back(0.5 * (a + b));
        }
    }
    if (inside) zeros.push_back(0.5 * (lo + 1.0));
    return zeros;
}

} // namespace detail

// Lower-semicontinuity probe: evaluates the Sadowsky energy along the
// perturbation sequence and reports liminf F(u_n) - F(base), where the liminf
// is estimated as the minimum over the tail half of the sequence. With
// kappa_m > 0 both base and members are evaluated with the regularized
// integrand, with quadrature panels split at located curvature zeros; this is
// the path for base curves with inflection points. Without regularization an
// inadmissible member raises an error naming it.
inline LscReport lsc_probe(const ProbeSequence& seq, const QuadratureScheme& quad,
                           double kappa_m = 0.0) {
    seq.validate();
    LscReport report;
    report.used_regularization = kappa_m > 0.0;

    auto evaluate = [&](const CurveSpec& curve, const std::string& label) {
        if (kappa_m > 0.0) {
            const std::vector<double> zeros = detail::locate_kappa_zeros(curve);
            return regularized_sadowsky_energy(curve, kappa_m, quad, zeros).value();
        }
        try {
            return sadowsky_energy(curve, quad).value();
        } catch (const inflection_error& e) {
            throw std::runtime_error("probe member " + label +
                                     " is inadmissible without regularization (curvature "
                                     "vanishes near t = " +
                                     std::to_string(e.t()) + ")");
        }
    };

    report.base_energy = evaluate(seq.base, "base");
    for (std::size_t i = 0; i < seq.amplitudes.size(); ++i)
        report.member_energies.push_back(evaluate(detail::probe_member(seq, i), std::to_string(i)));

    const std::size_t tail_start = seq.amplitudes.size() / 2;
    double tail_min = report.member_energies[tail_start];
    for (std::size_t i = tail_start; i < report.member_energies.size(); ++i)
        tail_min = std::min(tail_min, report.member_energies[i]);
    report.liminf_estimate = tail_min;
    report.margin = tail_min - report.base_energy;
    return report;
}

// Minimum-energy sequence across an eps grid against the Sadowsky minimum,
// all solves starting from the same curve over the same feasible set.
struct MinimizerConvergenceReport {
    std::vector<double> eps_grid;
    std::vector<std::optional<double>> min_energy; // nullopt marks a failed solve
    std::vector<std::string> failures;             // parallel to eps_grid, empty on success
    double sadowsky_min = 0.0;
    std::vector<std::optional<double>> gaps;
    std::vector<std::optional<double>> coefficient_distances;
    bool nonincreasing = true;
    bool bounded_below = true;
};

inline MinimizerConvergenceReport minimizer_convergence(const CurveSpec& curve0,
                                                        const std::vector<double>& eps_grid,
                                                        ObjectiveConfig cfg, int max_iter = 300,
                                                        double tol_grad = 1e-5,
                                                        double tol_rel_energy = 1e-11) {
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (eps_grid[i] <= eps_grid[i + 1])
            throw std::invalid_argument("eps grid must be strictly decreasing");

    MinimizerConvergenceReport report;
    report.eps_grid = eps_grid;

    cfg.energy_kind = EnergyKind::sadowsky;
    auto [sad_curve, sad_report] = minimize(curve0, cfg, max_iter, tol_grad, tol_rel_energy);
    report.sadowsky_min = sad_report.final_energy.as_double();
    const Eigen::VectorXd sad_coeffs = detail::flat_from_curve(sad_curve);

    for (double eps : eps_grid) {
        cfg.energy_kind = EnergyKind::wunderlich;
        cfg.eps = eps;
        try {
            auto [curve, solve] = minimize(curve0, cfg, max_iter, tol_grad, tol_rel_energy);
            const double m = solve.final_energy.as_double();
            report.min_energy.push_back(m);
            report.failures.emplace_back();
            report.gaps.push_back(m - report.sadowsky_min);
            Eigen::VectorXd diff = detail::flat_from_curve(curve);
            if (diff.size() == sad_coeffs.size()) {
                report.coefficient_distances.push_back((diff - sad_coeffs).norm());
            } else {
                report.coefficient_distances.push_back(std::nullopt);
            }
        } catch (const std::exception& e) {
            report.min_energy.push_back(std::nullopt);
            report.failures.emplace_back(e.what());
            report.gaps.push_back(std::nullopt);
            report.coefficient_distances.push_back(std::nullopt);
        }
    }

    // Solver-tolerance slack for the ordering checks.
    const double slack = 1e-6 * (1.0 + std::abs(report.sadowsky_min));
    std::optional<double> prev;
    for (const std::optional<double>& m : report.min_energy) {
        if (!m) continue;
        if (prev && *m > *prev + slack) report.nonincreasing = false;
        if (*m < report.sadowsky_min - slack) report.bounded_below = false;
        prev = m;
    }
    return report;
}

enum class InflectionKind { single_zero, mobius_like };

struct InflectionCurve {
    CurveSpec curve;
    std::vector<double> kappa_zeros; // parameter locations
};

// Analytic test curves whose curvature vanishes on a finite set.
//
// single_zero: the polynomial arc (phi, a phi^3, b phi^5) with phi = t - 1/2.
// Curvature vanishes exactly at t = 1/2 (to first order in phi) and torsion
// vanishes there as well, so the Sadowsky integrand stays bounded.
//
// mobius_like: the closed planar curve (cos h - c cos 2h, sin h - c sin 2h)
// with h = 2 pi t. Its signed curvature is proportional to 1 + 8c^2 - 6c cos h,
// which has zeros iff c in [1/4, 1/2): one tangential zero at c = 1/4, two
// transversal zeros for larger c. A closed centerline with curvature zeros is
// the necessary configuration for a ribbon forming a Moebius band; parameters
// outside [1/4, 1/2) are rejected because the curvature never vanishes (or the
// curve develops a cusp at c = 1/2).
inline InflectionCurve inflection_test_curve(InflectionKind kind, double p1 = 0.0,
                                             double p2 = 0.0) {
    if (kind == InflectionKind::single_zero) {
        const double a = p1 > 0.0 ? p1 : 4.0;
        const double b = p2 > 0.0 ? p2 : 8.0;
        if (a <= 0.0 || b <= 0.0)
            throw std::invalid_argument("single_zero needs positive shape parameters");
        CurveSpec curve = fit_curve(
            [=](double t) {
                const double phi = t - 0.5;
                const double phi2 = phi * phi;
                return Vec3(phi, a * phi * phi2, b * phi * phi2 * phi2);
            },
            BasisKind::chebyshev_open, 8);
        return {std::move(curve), {0.5}};
    }

    const double c = p1 > 0.0 ? p1 : 0.25;
    if (c < 0.25 || c >= 0.5)
        throw std::invalid_argument(
            "mobius_like parameter must lie in [0.25, 0.5): smaller values give a curve with "
            "nonvanishing curvature, 0.5 gives a cusp");
    Eigen::Matrix3Xd coeffs = Eigen::Matrix3Xd::Zero(3, 9);
    coeffs(0, 1) = 1.0;
    coeffs(1, 2) = 1.0;
    coeffs(0, 3) = -c;
    coeffs(1, 4) = -c;
    CurveSpec curve(BasisKind::fourier_closed, std::move(coeffs));
    // Zeros of 1 + 8c^2 - 6c cos(2 pi t).
    const double cos_h = (1.0 + 8.0 * c * c) / (6.0 * c);
    std::vector<double> zeros;
    if (cos_h >= 1.0 - 1e-14) {
        zeros.push_back(0.0);
    } else {
        const double h = std::acos(cos_h);
        zeros.push_back(h / (2.0 * M_PI));
        zeros.push_back(1.0 - h / (2.0 * M_PI));
    }
    return {std::move(curve), std::move(zeros)};
}

} // namespace ribbonlim
