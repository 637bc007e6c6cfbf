#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ribbonlim {

using Vec3 = Eigen::Vector3d;

enum class BasisKind { chebyshev_open, fourier_closed };

// Clamped-end data: a position together with a unit tangent direction.
struct EndCondition {
    Vec3 position = Vec3::Zero();
    Vec3 tangent = Vec3::UnitX();
};

struct BoundaryData {
    EndCondition start;
    EndCondition end;
};

// Curve point with its first four parametric derivatives.
struct CurveJet {
    Vec3 position = Vec3::Zero();
    Vec3 d1 = Vec3::Zero();
    Vec3 d2 = Vec3::Zero();
    Vec3 d3 = Vec3::Zero();
    Vec3 d4 = Vec3::Zero();
};

// Smooth parametric space curve on [0, 1] in a global analytic basis:
// Chebyshev polynomials for open curves, a real trigonometric basis
// (1, cos 2*pi*j*t, sin 2*pi*j*t) for closed ones. Immutable once built.
// Derivatives of any order are exact for the basis, which is what the
// fourth-order quantities downstream need.
class CurveSpec {
public:
    CurveSpec(BasisKind basis, Eigen::Matrix3Xd coefficients,
              std::optional<BoundaryData> boundary = std::nullopt,
              double target_length = 1.0)
        : basis_(basis),
          coefficients_(std::move(coefficients)),
          boundary_(std::move(boundary)),
          target_length_(target_length) {
        if (coefficients_.cols() < 8)
            throw std::invalid_argument("CurveSpec needs at least 8 coefficients per component");
        if (target_length_ <= 0.0)
            throw std::invalid_argument("target_length must be positive");
        if (boundary_) {
            const double na = boundary_->start.tangent.norm();
            const double nb = boundary_->end.tangent.norm();
            if (std::abs(na - 1.0) > 1e-12 || std::abs(nb - 1.0) > 1e-12)
                throw std::invalid_argument("boundary tangents must have unit norm");
        }
    }

    BasisKind basis_kind() const { return basis_; }
    bool closure() const { return basis_ == BasisKind::fourier_closed; }
    int coefficient_count() const { return static_cast<int>(coefficients_.cols()); }
    const Eigen::Matrix3Xd& coefficients() const { return coefficients_; }
    const std::optional<BoundaryData>& boundary_data() const { return boundary_; }
    double target_length() const { return target_length_; }

    CurveSpec with_coefficients(Eigen::Matrix3Xd coeffs) const {
        return CurveSpec(basis_, std::move(coeffs), boundary_, target_length_);
    }

    // Point and exact parametric derivatives of orders 1..4.
    CurveJet evaluate_derivatives(double t) const {
        if (t < 0.0 || t > 1.0)
            throw std::domain_error("curve parameter outside [0, 1]");
        return basis_ == BasisKind::chebyshev_open ? eval_chebyshev(t) : eval_fourier(t);
    }

    // Basis row (value and t-derivatives up to order 4) of coefficient k at t.
    // Exposed for boundary-condition constraint assembly.
    static void basis_row(BasisKind basis, int k, double t, double out[5]) {
        if (basis == BasisKind::chebyshev_open) {
            chebyshev_row(k, 2.0 * t - 1.0, out);
        } else {
            fourier_row(k, t, out);
        }
    }

private:
    CurveJet eval_chebyshev(double t) const {
        const double x = 2.0 * t - 1.0;
        const int n = coefficient_count();
        CurveJet jet;
        // Running recurrence for T_k and its first four x-derivatives.
        double prev[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
        double curr[5] = {x, 1.0, 0.0, 0.0, 0.0};
        jet.position += coefficients_.col(0) * prev[0];
        if (n > 1) {
            jet.position += coefficients_.col(1) * curr[0];
            jet.d1 += coefficients_.col(1) * curr[1];
        }
        for (int k = 2; k < n; ++k) {
            double next[5];
            next[0] = 2.0 * x * curr[0] - prev[0];
            next[1] = 2.0 * curr[0] + 2.0 * x * curr[1] - prev[1];
            next[2] = 4.0 * curr[1] + 2.0 * x * curr[2] - prev[2];
            next[3] = 6.0 * curr[2] + 2.0 * x * curr[3] - prev[3];
            next[4] = 8.0 * curr[3] + 2.0 * x * curr[4] - prev[4];
            jet.position += coefficients_.col(k) * next[0];
            jet.d1 += coefficients_.col(k) * next[1];
            jet.d2 += coefficients_.col(k) * next[2];
            jet.d3 += coefficients_.col(k) * next[3];
            jet.d4 += coefficients_.col(k) * next[4];
            for (int i = 0; i < 5; ++i) {
                prev[i] = curr[i];
                curr[i] = next[i];
            }
        }
        // Chain rule for x = 2t - 1.
        jet.d1 *= 2.0;
        jet.d2 *= 4.0;
        jet.d3 *= 8.0;
        jet.d4 *= 16.0;
        return jet;
    }

    CurveJet eval_fourier(double t) const {
        const int n = coefficient_count();
        CurveJet jet;
        jet.position = coefficients_.col(0);
        const double theta = 2.0 * M_PI * t;
        const double c1 = std::cos(theta), s1 = std::sin(theta);
        double cj = 1.0, sj = 0.0;
        for (int j = 1; 2 * j - 1 < n; ++j) {
            const double c = cj * c1 - sj * s1;
            const double s = sj * c1 + cj * s1;
            cj = c;
            sj = s;
            const double w = 2.0 * M_PI * j;
            const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
            const Vec3 a = coefficients_.col(2 * j - 1);
            jet.position += a * c;
            jet.d1 += a * (-w * s);
            jet.d2 += a * (-w2 * c);
            jet.d3 += a * (w3 * s);
            jet.d4 += a * (w4 * c);
            if (2 * j < n) {
                const Vec3 b = coefficients_.col(2 * j);
                jet.position += b * s;
                jet.d1 += b * (w * c);
                jet.d2 += b * (-w2 * s);
                jet.d3 += b * (-w3 * c);
                jet.d4 += b * (w4 * s);
            }
        }
        return jet;
    }

    static void chebyshev_row(int k, double x, double out[5]) {
        double prev[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
        double curr[5] = {x, 1.0, 0.0, 0.0, 0.0};
        if (k == 0) {
            for (int i = 0; i < 5; ++i) out[i] = prev[i];
        } else if (k == 1) {
            for (int i = 0; i < 5; ++i) out[i] = curr[i];
        } else {
            for (int m = 2; m <= k; ++m) {
                double next[5];
                next[0] = 2.0 * x * curr[0] - prev[0];
                next[1] = 2.0 * curr[0] + 2.0 * x * curr[1] - prev[1];
                next[2] = 4.0 * curr[1] + 2.0 * x * curr[2] - prev[2];
                next[3] = 6.0 * curr[2] + 2.0 * x * curr[3] - prev[3];
                next[4] = 8.0 * curr[3] + 2.0 * x * curr[4] - prev[4];
                for (int i = 0; i < 5; ++i) {
                    prev[i] = curr[i];
                    curr[i] = next[i];
                }
            }
            for (int i = 0; i < 5; ++i) out[i] = curr[i];
        }
        double factor = 2.0;
        for (int i = 1; i < 5; ++i) {
            out[i] *= factor;
            factor *= 2.0;
        }
    }

    static void fourier_row(int k, double t, double out[5]) {
        if (k == 0) {
            out[0] = 1.0;
            out[1] = out[2] = out[3] = out[4] = 0.0;
            return;
        }
        const int j = (k + 1) / 2;
        const double w = 2.0 * M_PI * j;
        const double arg = w * t;
        const double c = std::cos(arg), s = std::sin(arg);
        const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
        if (k % 2 == 1) { // cos(2 pi j t)
            out[0] = c;
            out[1] = -w * s;
            out[2] = -w2 * c;
            out[3] = w3 * s;
            out[4] = w4 * c;
        } else { // sin(2 pi j t)
            out[0] = s;
            out[1] = w * c;
            out[2] = -w2 * s;
            out[3] = -w3 * c;
            out[4] = w4 * s;
        }
    }

    BasisKind basis_;
    Eigen::Matrix3Xd coefficients_;
    std::optional<BoundaryData> boundary_;
    double target_length_;
};

// Chebyshev interpolation coefficients from values at the n+1 Lobatto points
// x_j = cos(pi j / n), returned so that f(x) = sum_k c_k T_k(x). Sums are
// accumulated in extended precision: the small tail coefficients get
// multiplied by basis derivatives growing like k^8, so their absolute
// accuracy matters well below the working epsilon.
inline std::vector<double> chebyshev_coefficients_from_lobatto(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size()) - 1;
    const long double pi = 3.14159265358979323846264338327950288L;
    std::vector<double> coeffs(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        long double sum =
            0.5L * (static_cast<long double>(values[0]) +
                    (k % 2 == 0 ? 1.0L : -1.0L) * static_cast<long double>(values[n]));
        for (int j = 1; j < n; ++j)
            sum += static_cast<long double>(values[j]) * std::cos(pi * j * k / n);
        coeffs[k] = static_cast<double>(2.0L * sum / n);
    }
    coeffs[0] *= 0.5;
    coeffs[n] *= 0.5;
    return coeffs;
}

// Interpolate/project a smooth function into the requested basis with
// `coefficient_count` coefficients. Chebyshev uses Lobatto interpolation
// (exact for polynomials of matching degree); Fourier uses an oversampled
// discrete transform (exact for trigonometric polynomials that fit).
inline CurveSpec fit_curve(const std::function<Vec3(double)>& f, BasisKind basis,
                           int coefficient_count,
                           std::optional<BoundaryData> boundary = std::nullopt,
                           double target_length = 1.0) {
    if (coefficient_count < 8) throw std::invalid_argument("fit_curve needs >= 8 coefficients");
    Eigen::Matrix3Xd coeffs(3, coefficient_count);
    if (basis == BasisKind::chebyshev_open) {
        const int n = coefficient_count - 1;
        std::vector<Vec3> samples(n + 1);
        for (int j = 0; j <= n; ++j) {
            const double x = std::cos(M_PI * j / n);
            samples[j] = f(0.5 * (x + 1.0));
        }
        for (int comp = 0; comp < 3; ++comp) {
            std::vector<double> values(n + 1);
            for (int j = 0; j <= n; ++j) values[j] = samples[j][comp];
            const std::vector<double> c = chebyshev_coefficients_from_lobatto(values);
            for (int k = 0; k <= n; ++k) coeffs(comp, k) = c[k];
        }
    } else {
        const int harmonics = (coefficient_count - 1) / 2;
        const int m = std::max(4 * harmonics + 8, 64);
        const long double pi = 3.14159265358979323846264338327950288L;
        std::vector<Vec3> samples(m);
        for (int j = 0; j < m; ++j) samples[j] = f(static_cast<double>(j) / m);
        coeffs.setZero();
        for (int c = 0; c < 3; ++c) {
            long double mean = 0.0L;
            for (int j = 0; j < m; ++j) mean += samples[j][c];
            coeffs(c, 0) = static_cast<double>(mean / m);
            for (int h = 1; h <= harmonics; ++h) {
                long double ac = 0.0L, as = 0.0L;
                for (int j = 0; j < m; ++j) {
                    const long double arg = 2.0L * pi * h * j / m;
                    ac += samples[j][c] * std::cos(arg);
                    as += samples[j][c] * std::sin(arg);
                }
                coeffs(c, 2 * h - 1) = static_cast<double>(2.0L * ac / m);
                if (2 * h < coefficient_count) coeffs(c, 2 * h) = static_cast<double>(2.0L * as / m);
            }
        }
    }
    // Drop sampling noise in the tail: entries at that level would otherwise
    // be amplified by the k^8 growth of the fourth basis derivatives.
    const double floor = 4e-16 * coeffs.cwiseAbs().maxCoeff();
    coeffs = (coeffs.cwiseAbs().array() < floor).select(0.0, coeffs);
    return CurveSpec(basis, std::move(coeffs), std::move(boundary), target_length);
}

// Rigid motions and reflections act linearly on the coefficient vectors.
inline CurveSpec transform_curve(const CurveSpec& curve, const Eigen::Matrix3d& linear,
                                 const Vec3& translation = Vec3::Zero()) {
    Eigen::Matrix3Xd coeffs = linear * curve.coefficients();
    // The constant basis function carries the translation.
    coeffs.col(0) += translation;
    std::optional<BoundaryData> boundary = curve.boundary_data();
    if (boundary) {
        boundary->start.position = linear * boundary->start.position + translation;
        boundary->end.position = linear * boundary->end.position + translation;
        boundary->start.tangent = (linear * boundary->start.tangent).normalized();
        boundary->end.tangent = (linear * boundary->end.tangent).normalized();
    }
    return CurveSpec(curve.basis_kind(), std::move(coeffs), std::move(boundary),
                     curve.target_length());
}

} // namespace ribbonlim
