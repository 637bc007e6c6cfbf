#pragma once

#include <cmath>
#include <limits>

namespace ribbonlim {

// Width-integration kernel of the ribbon bending energy:
//   g(0) = 1,  g(x) = ln((2+x)/(2-x)) / x  for 0 < |x| < 2,  g = +inf for |x| >= 2.
// Even in x by construction (evaluated through |x|), >= 1 everywhere, strictly
// increasing in |x| on (0, 2). The log is taken as log1p(2|x|/(2-|x|)) and a
// series is used below 1e-3 where the direct quotient loses about half the
// significant digits.
inline double eval_g(double x) {
    const double u = std::abs(x);
    if (u >= 2.0) return std::numeric_limits<double>::infinity();
    if (u == 0.0) return 1.0;
    if (u < 1e-3) {
        const double u2 = u * u;
        return 1.0 + u2 * (1.0 / 12.0 + u2 * (1.0 / 80.0 + u2 * (1.0 / 448.0)));
    }
    return std::log1p(2.0 * u / (2.0 - u)) / u;
}

// Truncated even series 1 + x^2/12 + x^4/80 + x^6/448, the small-|x| model of g.
inline double g_series(double x) {
    const double u2 = x * x;
    return 1.0 + u2 * (1.0 / 12.0 + u2 * (1.0 / 80.0 + u2 * (1.0 / 448.0)));
}

} // namespace ribbonlim
