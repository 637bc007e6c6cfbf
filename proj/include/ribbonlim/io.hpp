#pragma once

#include "ribbonlim/constraints.hpp"
#include "ribbonlim/curve.hpp"
#include "ribbonlim/energy.hpp"
#include "ribbonlim/frenet.hpp"
#include "ribbonlim/gamma_lab.hpp"
#include "ribbonlim/solver.hpp"
#include "ribbonlim/surface.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ribbonlim {

using ordered_json = nlohmann::ordered_json;

// All floating output goes through this: 17 significant digits round-trip a
// binary64 exactly.
inline std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

namespace detail {

inline void dump_json(const ordered_json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + ordered_json(it.key()).dump() + ": ";
                dump_json(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_json(item, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace detail

// Serialize with doubles at 17 significant digits (nlohmann's own dump uses
// shortest-round-trip formatting, which is stable but not the documented
// fixed-width form).
inline std::string to_json_text(const ordered_json& j) {
    std::string out;
    detail::dump_json(j, out, 2, 0);
    out += "\n";
    return out;
}

// Write-then-rename so readers never observe a partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- curve files -----------------------------------------------------------

inline ordered_json curve_to_json(const CurveSpec& curve) {
    ordered_json j;
    j["basis_kind"] =
        curve.basis_kind() == BasisKind::chebyshev_open ? "chebyshev_open" : "fourier_closed";
    j["closure"] = curve.closure();
    ordered_json coeffs = ordered_json::array();
    for (int c = 0; c < 3; ++c) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < curve.coefficient_count(); ++k)
            row.push_back(curve.coefficients()(c, k));
        coeffs.push_back(std::move(row));
    }
    j["coefficients"] = std::move(coeffs);
    if (curve.boundary_data()) {
        const BoundaryData& bd = *curve.boundary_data();
        auto end_json = [](const EndCondition& e) {
            ordered_json out;
            out["position"] = {e.position[0], e.position[1], e.position[2]};
            out["tangent"] = {e.tangent[0], e.tangent[1], e.tangent[2]};
            return out;
        };
        j["boundary_data"] = {{"a", end_json(bd.start)}, {"b", end_json(bd.end)}};
    }
    j["target_length"] = curve.target_length();
    return j;
}

inline CurveSpec curve_from_json(const ordered_json& j) {
    const std::string kind_str = j.at("basis_kind").get<std::string>();
    BasisKind kind;
    if (kind_str == "chebyshev_open")
        kind = BasisKind::chebyshev_open;
    else if (kind_str == "fourier_closed")
        kind = BasisKind::fourier_closed;
    else
        throw std::runtime_error("unknown basis_kind: " + kind_str);

    const ordered_json& rows = j.at("coefficients");
    if (rows.size() != 3) throw std::runtime_error("coefficients must have 3 rows");
    const std::size_t n = rows[0].size();
    Eigen::Matrix3Xd coeffs(3, static_cast<int>(n));
    for (int c = 0; c < 3; ++c) {
        if (rows[c].size() != n) throw std::runtime_error("ragged coefficient rows");
        for (std::size_t k = 0; k < n; ++k) coeffs(c, static_cast<int>(k)) = rows[c][k].get<double>();
    }

    std::optional<BoundaryData> boundary;
    if (j.contains("boundary_data") && !j.at("boundary_data").is_null()) {
        auto end_from = [](const ordered_json& e) {
            EndCondition out;
            for (int i = 0; i < 3; ++i) {
                out.position[i] = e.at("position")[i].get<double>();
                out.tangent[i] = e.at("tangent")[i].get<double>();
            }
            return out;
        };
        boundary = BoundaryData{end_from(j.at("boundary_data").at("a")),
                                end_from(j.at("boundary_data").at("b"))};
    }
    const double target_length =
        j.contains("target_length") ? j.at("target_length").get<double>() : 1.0;

    const bool closure = j.contains("closure") ? j.at("closure").get<bool>()
                                               : (kind == BasisKind::fourier_closed);
    if (closure != (kind == BasisKind::fourier_closed))
        throw std::runtime_error("closure flag inconsistent with basis_kind");
    return CurveSpec(kind, std::move(coeffs), std::move(boundary), target_length);
}

inline void write_curve(const std::filesystem::path& path, const CurveSpec& curve) {
    atomic_write_text(path, to_json_text(curve_to_json(curve)));
}

inline CurveSpec read_curve(const std::filesystem::path& path) {
    return curve_from_json(ordered_json::parse(read_text(path)));
}

// ---- reports ---------------------------------------------------------------

inline ordered_json energy_to_json(const EnergyValue& energy, const QuadratureScheme& quad) {
    ordered_json j;
    j["kind"] = energy.is_finite() ? "finite" : "infinite";
    if (energy.is_finite()) {
        j["value"] = energy.value();
    } else {
        j["blowup"] = {{"measure_estimate", energy.blowup()->measure_estimate},
                       {"first_t", energy.blowup()->first_t}};
    }
    if (!energy.boundary_touches().empty()) j["warnings"] = energy.boundary_touches();
    j["quad"] = {{"panels", quad.panels}, {"nodes_per_panel", quad.nodes_per_panel}};
    return j;
}

// Per-node geometry and integrand dump; columns fixed by the energy module's
// external interface.
inline std::string frenet_csv(const CurveSpec& curve, const QuadratureScheme& quad, double eps) {
    const double length = curve_length(curve);
    std::string csv = "t,s,kappa,tau,eta,eta_prime,sadowsky_integrand,wunderlich_integrand\n";
    double s_cursor = 0.0;
    double t_prev = 0.0;
    for (const QuadratureNode& node : scheme_nodes(quad)) {
        const FrenetSample geo = detail::frenet_no_arclength(curve, node.t);
        s_cursor += integrate_panel(
            [&](double u) { return curve.evaluate_derivatives(u).d1.norm(); }, t_prev, node.t, 16);
        t_prev = node.t;
        // Normalized quantities of the unit-length curve.
        const double kappa_n = length * geo.kappa;
        const double eta_prime_n = length * geo.eta_prime;
        const double one_plus = 1.0 + geo.eta * geo.eta;
        const double sadowsky = kappa_n * kappa_n * one_plus * one_plus;
        const double wunderlich = sadowsky * eval_g(eps * eta_prime_n);
        csv += format_double(node.t) + "," + format_double(s_cursor / length) + "," +
               format_double(kappa_n) + "," + format_double(length * geo.tau) + "," +
               format_double(geo.eta) + "," + format_double(eta_prime_n) + "," +
               format_double(sadowsky) + "," + format_double(wunderlich) + "\n";
    }
    return csv;
}

inline ordered_json sweep_to_json(const SweepReport& report, const QuadratureScheme& quad) {
    ordered_json j;
    j["eps_grid"] = report.eps_grid;
    ordered_json values = ordered_json::array();
    for (const EnergyValue& e : report.F_eps) values.push_back(energy_to_json(e, quad));
    j["F_eps"] = std::move(values);
    j["F_limit"] = report.F_limit;
    j["monotone"] = report.monotone;
    if (report.fitted_rate) {
        j["fitted_rate"] = *report.fitted_rate;
        j["fitted_prefactor"] = *report.fitted_prefactor;
    } else {
        j["fitted_rate"] = nullptr;
        j["fitted_prefactor"] = nullptr;
    }
    j["degenerate_fit"] = report.degenerate_fit;
    return j;
}

inline std::string sweep_csv(const SweepReport& report) {
    std::string csv = "eps,kind,F_eps,gap,measure_estimate,first_t\n";
    for (std::size_t i = 0; i < report.eps_grid.size(); ++i) {
        const EnergyValue& e = report.F_eps[i];
        csv += format_double(report.eps_grid[i]) + ",";
        if (e.is_finite()) {
            csv += "finite," + format_double(e.value()) + "," +
                   format_double(e.value() - report.F_limit) + ",,";
        } else {
            csv += "infinite,,," + format_double(e.blowup()->measure_estimate) + "," +
                   format_double(e.blowup()->first_t);
        }
        csv += "\n";
    }
    return csv;
}

inline ordered_json solve_report_to_json(const SolveReport& report,
                                         const QuadratureScheme& quad) {
    ordered_json j;
    j["final_energy"] = energy_to_json(report.final_energy, quad);
    j["final_objective"] = report.final_objective;
    j["iterations"] = report.iterations;
    j["grad_norm"] = report.grad_norm;
    j["constraint_residuals"] = {{"speed", report.speed_residual},
                                 {"length", report.length_residual},
                                 {"bc", report.bc_residual},
                                 {"kappa_min", report.kappa_min_residual}};
    j["converged"] = report.converged;
    j["status"] = report.status;
    return j;
}

inline std::string history_csv(const SolveReport& report) {
    std::string csv = "iteration,objective,grad_norm\n";
    for (const HistoryEntry& h : report.history)
        csv += std::to_string(h.iteration) + "," + format_double(h.objective) + "," +
               format_double(h.grad_norm) + "\n";
    return csv;
}

inline ordered_json lsc_report_to_json(const LscReport& report) {
    ordered_json j;
    j["member_energies"] = report.member_energies;
    j["base_energy"] = report.base_energy;
    j["liminf_estimate"] = report.liminf_estimate;
    j["margin"] = report.margin;
    j["used_regularization"] = report.used_regularization;
    return j;
}

inline ordered_json minimizer_convergence_to_json(const MinimizerConvergenceReport& report) {
    ordered_json j;
    j["eps_grid"] = report.eps_grid;
    auto opt_array = [](const std::vector<std::optional<double>>& values) {
        ordered_json arr = ordered_json::array();
        for (const std::optional<double>& v : values) {
            if (v)
                arr.push_back(*v);
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    j["min_energy"] = opt_array(report.min_energy);
    j["sadowsky_min"] = report.sadowsky_min;
    j["gaps"] = opt_array(report.gaps);
    j["coefficient_distances"] = opt_array(report.coefficient_distances);
    j["failures"] = report.failures;
    j["nonincreasing"] = report.nonincreasing;
    j["bounded_below"] = report.bounded_below;
    return j;
}

// ---- meshes ----------------------------------------------------------------

inline std::string mesh_to_obj(const RibbonMesh& mesh) {
    std::string obj;
    obj.reserve(mesh.vertices.size() * 64);
    for (const Vec3& v : mesh.vertices)
        obj += "v " + format_double(v[0]) + " " + format_double(v[1]) + " " +
               format_double(v[2]) + "\n";
    for (const std::array<int, 3>& f : mesh.faces)
        obj += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
               std::to_string(f[2] + 1) + "\n";
    return obj;
}

inline std::string kappa1_csv(const RibbonMesh& mesh) {
    std::string csv = "vertex_index,kappa1\n";
    for (std::size_t i = 0; i < mesh.per_vertex_kappa1.size(); ++i)
        csv += std::to_string(i) + "," + format_double(mesh.per_vertex_kappa1[i]) + "\n";
    return csv;
}

} // namespace ribbonlim
