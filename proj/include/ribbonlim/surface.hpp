#pragma once

#include "ribbonlim/curve.hpp"
#include "ribbonlim/energy.hpp"
#include "ribbonlim/errors.hpp"
#include "ribbonlim/frenet.hpp"
#include "ribbonlim/kernel.hpp"
#include "ribbonlim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace ribbonlim {

// Point of the rectifying developable x(t, v) = r(t) + v (b + eta t_hat),
// with t_hat the unit tangent and b the unit binormal. v is measured in the
// curve's own coordinates.
inline Vec3 ruled_surface_point(const CurveSpec& curve, double t, double v, double half_width,
                                double kappa_floor = kappa_floor_eval) {
    if (std::abs(v) > half_width) throw std::domain_error("|v| exceeds the ribbon half-width");
    const FrenetSample s = detail::frenet_no_arclength(curve, t, kappa_floor);
    const Vec3 tangent = s.d1 / s.speed;
    const Vec3 binormal = s.d1.cross(s.d2).normalized();
    return s.position + v * (binormal + s.eta * tangent);
}

// Nonvanishing principal curvature kappa_1 = kappa (1 + eta^2) / |1 + v eta'|
// of the ruled strip at width coordinate v. The sample's units fix the units
// of v: pass a sample of the length-normalized curve for the nondimensional
// ribbon of half-width eps/2.
inline double principal_curvature(const FrenetSample& sample, double v) {
    const double denom = 1.0 + v * sample.eta_prime;
    if (std::abs(denom) < 1e-12) throw edge_of_regression_error(sample.t_param, v);
    return sample.kappa * (1.0 + sample.eta * sample.eta) / std::abs(denom);
}

// Full two-dimensional bending energy of the nondimensional ribbon,
//   (1/eps) * integral of kappa_1^2 over [0,1] x [-eps/2, eps/2]
// in arclength-normalized ruling coordinates with area element |1 + v eta'| dv ds,
// normalized so the value is directly comparable to the Wunderlich energy
// F_eps (the width integral of 1/|1 + v eta'| is exactly eps g(eps eta')).
// The s-quadrature reuses the same nodes as the one-dimensional energies, so
// a comparison at matched resolution isolates the width integration.
inline EnergyValue surface_energy(const CurveSpec& curve, double eps, const QuadratureScheme& quad_s,
                                  const QuadratureScheme& quad_v, int diag_grid = 4096,
                                  double kappa_floor = kappa_floor_eval) {
    if (eps < 0.0) throw std::domain_error("eps must be >= 0");
    const detail::SampledCurve sampled = detail::sample_for_energy(curve, quad_s, kappa_floor);
    const double len = sampled.length;
    if (eps == 0.0) {
        // Width-collapse limit: the width average of kappa_1^2 |1 + v eta'|
        // degenerates to the Sadowsky integrand.
        double sum = 0.0;
        for (const detail::EnergyNode& node : sampled.nodes)
            sum += node.weight * sadowsky_integrand(node.geo) * node.geo.speed;
        return EnergyValue::finite(len * sum);
    }

    double node_max = 0.0;
    for (const detail::EnergyNode& node : sampled.nodes)
        node_max = std::max(node_max, std::abs(eps * len * node.geo.eta_prime));
    std::vector<double> touches;
    if (node_max >= 1.0) {
        const BlowupDiagnostic diag = detail::blowup_scan(curve, eps, len, diag_grid, kappa_floor);
        if (diag.measure_estimate > 0.0) return EnergyValue::infinite(diag);
        for (const detail::EnergyNode& node : sampled.nodes)
            if (std::abs(eps * len * node.geo.eta_prime) >= 2.0) touches.push_back(node.t);
    }

    const std::vector<QuadratureNode> width_nodes = scheme_nodes(quad_v);
    double sum = 0.0;
    for (const detail::EnergyNode& node : sampled.nodes) {
        const double kappa_n = len * node.geo.kappa;
        const double eta = node.geo.eta;
        const double eta_prime_n = len * node.geo.eta_prime;
        if (std::abs(eps * eta_prime_n) >= 2.0) continue; // isolated touch
        // Width coordinate v = eps * (w - 1/2) for w in [0, 1].
        double inner = 0.0;
        for (const QuadratureNode& wn : width_nodes) {
            const double v = eps * (wn.t - 0.5);
            const double denom = 1.0 + v * eta_prime_n;
            const double kappa1 = kappa_n * (1.0 + eta * eta) / std::abs(denom);
            inner += wn.weight * eps * kappa1 * kappa1 * std::abs(denom);
        }
        sum += node.weight * inner * node.geo.speed / len;
    }
    return EnergyValue::finite(sum / eps, std::move(touches));
}

// Triangulated rectifying developable. Vertices are laid out row-major over
// an (n_s, n_v) grid; closed centerlines wrap the strip in s.
struct RibbonMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<double> per_vertex_kappa1;
    std::pair<int, int> grid_shape{0, 0};
    bool closed = false;
};

// Ribbon of aspect ratio eps around the given curve: physical half-width
// eps * length / 2. Triangle pairs split each grid cell along the lower-left
// to upper-right diagonal. If the edge of regression enters the strip at some
// sample (|v eta'| >= 1 across the width), the geometry is invalid and an
// edge_of_regression_error is thrown with the offending (t, v).
inline RibbonMesh build_mesh(const CurveSpec& curve, double eps, int n_s, int n_v,
                             double kappa_floor = kappa_floor_eval) {
    if (n_s < 16) throw std::invalid_argument("build_mesh needs n_s >= 16");
    if (n_v < 3) throw std::invalid_argument("build_mesh needs n_v >= 3");
    if (eps <= 0.0) throw std::domain_error("eps must be > 0");

    const double length = curve_length(curve);
    const double half_width = 0.5 * eps * length;

    RibbonMesh mesh;
    mesh.grid_shape = {n_s, n_v};
    mesh.closed = curve.closure();
    mesh.vertices.reserve(static_cast<std::size_t>(n_s) * n_v);
    mesh.per_vertex_kappa1.reserve(static_cast<std::size_t>(n_s) * n_v);

    for (int i = 0; i < n_s; ++i) {
        const double t = mesh.closed ? static_cast<double>(i) / n_s
                                     : static_cast<double>(i) / (n_s - 1);
        const FrenetSample s = detail::frenet_no_arclength(curve, t, kappa_floor);
        const Vec3 tangent = s.d1 / s.speed;
        const Vec3 binormal = s.d1.cross(s.d2).normalized();
        const Vec3 ruling = binormal + s.eta * tangent;
        if (std::abs(half_width * s.eta_prime) >= 1.0) {
            const double v_bad = (s.eta_prime > 0.0 ? -1.0 : 1.0) * half_width;
            throw edge_of_regression_error(t, v_bad);
        }
        for (int j = 0; j < n_v; ++j) {
            const double v = half_width * (2.0 * j / (n_v - 1.0) - 1.0);
            mesh.vertices.push_back(s.position + v * ruling);
            mesh.per_vertex_kappa1.push_back(principal_curvature(s, v));
        }
    }

    const int rows = mesh.closed ? n_s : n_s - 1;
    for (int i = 0; i < rows; ++i) {
        const int i1 = (i + 1) % n_s;
        for (int j = 0; j + 1 < n_v; ++j) {
            const int a = i * n_v + j;
            const int b = i * n_v + j + 1;
            const int c = i1 * n_v + j;
            const int d = i1 * n_v + j + 1;
            mesh.faces.push_back({a, c, d});
            mesh.faces.push_back({a, d, b});
        }
    }
    return mesh;
}

// Largest absolute angle defect 2 pi - sum(incident angles) over interior
// vertices; a discrete Gaussian curvature, near zero for developable strips.
inline double max_interior_angle_defect(const RibbonMesh& mesh) {
    const int n_s = mesh.grid_shape.first;
    const int n_v = mesh.grid_shape.second;
    std::vector<double> angle_sum(mesh.vertices.size(), 0.0);
    for (const std::array<int, 3>& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const Vec3& p = mesh.vertices[f[k]];
            const Vec3 e1 = mesh.vertices[f[(k + 1) % 3]] - p;
            const Vec3 e2 = mesh.vertices[f[(k + 2) % 3]] - p;
            const double c = e1.dot(e2) / (e1.norm() * e2.norm());
            angle_sum[f[k]] += std::acos(std::clamp(c, -1.0, 1.0));
        }
    }
    double worst = 0.0;
    for (int i = 0; i < n_s; ++i) {
        const bool interior_s = mesh.closed || (i > 0 && i + 1 < n_s);
        if (!interior_s) continue;
        for (int j = 1; j + 1 < n_v; ++j)
            worst = std::max(worst, std::abs(2.0 * M_PI - angle_sum[i * n_v + j]));
    }
    return worst;
}

} // namespace ribbonlim
