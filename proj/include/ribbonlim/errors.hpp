#pragma once

#include <stdexcept>
#include <string>

namespace ribbonlim {

// Curvature fell below the evaluation floor at parameter t; the Frenet frame,
// eta and the ruling direction are undefined there.
class inflection_error : public std::runtime_error {
public:
    explicit inflection_error(double t)
        : std::runtime_error("curvature vanishes near t = " + std::to_string(t)), t_(t) {}

    double t() const noexcept { return t_; }

private:
    double t_;
};

// Rulings of the developable cross inside the strip at (t, v).
class edge_of_regression_error : public std::runtime_error {
public:
    edge_of_regression_error(double t, double v)
        : std::runtime_error("edge of regression enters the strip at t = " + std::to_string(t) +
                             ", v = " + std::to_string(v)),
          t_(t), v_(v) {}

    double t() const noexcept { return t_; }
    double v() const noexcept { return v_; }

private:
    double t_;
    double v_;
};

// |c'| vanished on the evaluation grid; the curve cannot be reparameterized.
class degenerate_curve_error : public std::runtime_error {
public:
    explicit degenerate_curve_error(double t)
        : std::runtime_error("curve speed vanishes near t = " + std::to_string(t)), t_(t) {}

    double t() const noexcept { return t_; }

private:
    double t_;
};

// A finite-difference probe of the objective hit an infinite value, so the
// gradient component for that flat coefficient index cannot be formed.
class gradient_blocked_error : public std::runtime_error {
public:
    explicit gradient_blocked_error(int coordinate)
        : std::runtime_error("objective is infinite at a finite-difference probe of coordinate " +
                             std::to_string(coordinate)),
          coordinate_(coordinate) {}

    int coordinate() const noexcept { return coordinate_; }

private:
    int coordinate_;
};

} // namespace ribbonlim
