#include "ribbonlim/ribbonlim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using ribbonlim::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1; // InflectionPoint, EdgeOfRegression, NoDescent
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string out_dir;
    int quad_panels = 32;
    int quad_order = 12;
    unsigned seed = 0;
};

void write_error_json(const std::optional<fs::path>& out_dir, const std::string& kind,
                      const std::string& location, const std::string& message) {
    ordered_json j;
    j["error_kind"] = kind;
    j["location"] = location;
    j["message"] = message;
    const std::string text = ribbonlim::to_json_text(j);
    std::cerr << text;
    if (out_dir) {
        std::error_code ec;
        fs::create_directories(*out_dir, ec);
        if (!ec) ribbonlim::atomic_write_text(*out_dir / "error.json", text);
    }
}

void ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw CLI::ValidationError("--out", "output directory is required");
    fs::create_directories(out_dir);
}

void echo_run_config(const CommonOptions& common, const std::string& command, ordered_json extra) {
    ordered_json j;
    j["command"] = command;
    j["out"] = common.out_dir;
    j["quad"] = {{"panels", common.quad_panels}, {"nodes_per_panel", common.quad_order}};
    j["seed"] = common.seed;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    ribbonlim::atomic_write_text(fs::path(common.out_dir) / "run_config.json",
                                 ribbonlim::to_json_text(j));
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw CLI::ValidationError("--eps-grid", "empty grid");
    return grid;
}

ribbonlim::CurveSpec load_curve(const std::string& path) {
    if (!fs::exists(path)) throw CLI::ValidationError("--curve", "no such file: " + path);
    return ribbonlim::read_curve(path);
}

// Shared solver configuration flags, optionally preloaded from a JSON config
// file (CLI flags override file values, unknown keys are rejected).
struct SolveFlags {
    std::string config_path;
    std::string energy = "sadowsky";
    double eps = 0.1;
    double kappa_m = 0.0;
    double penalty_speed = 1e4;
    double penalty_length = 1e6;
    double barrier_kappa = 0.0;
    int max_iter = 300;
    double tol_grad = 1e-5;
    double tol_rel_energy = 1e-11;

    // File values fill in everything the user did not pass explicitly;
    // unknown keys are rejected.
    void load_file_defaults(const CLI::App* cmd) {
        if (config_path.empty()) return;
        if (!fs::exists(config_path))
            throw CLI::ValidationError("--config", "no such file: " + config_path);
        const ordered_json j = ordered_json::parse(ribbonlim::read_text(config_path));
        auto given = [&](const std::string& flag) {
            const CLI::Option* opt = cmd->get_option_no_throw(flag);
            return opt != nullptr && opt->count() > 0;
        };
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            if (key == "energy") {
                if (!given("--energy")) energy = it.value().get<std::string>();
            } else if (key == "eps") {
                if (!given("--eps")) eps = it.value().get<double>();
            } else if (key == "kappa_m") {
                if (!given("--kappa-m")) kappa_m = it.value().get<double>();
            } else if (key == "penalty_speed") {
                if (!given("--penalty-speed")) penalty_speed = it.value().get<double>();
            } else if (key == "penalty_length") {
                if (!given("--penalty-length")) penalty_length = it.value().get<double>();
            } else if (key == "barrier_kappa") {
                if (!given("--barrier-kappa")) barrier_kappa = it.value().get<double>();
            } else if (key == "max_iter") {
                if (!given("--max-iter")) max_iter = it.value().get<int>();
            } else if (key == "tol_grad") {
                if (!given("--tol-grad")) tol_grad = it.value().get<double>();
            } else if (key == "tol_rel_energy") {
                if (!given("--tol-rel-energy")) tol_rel_energy = it.value().get<double>();
            } else {
                throw CLI::ValidationError("--config", "unknown key: " + key);
            }
        }
    }

    ribbonlim::ObjectiveConfig to_config(const CommonOptions& common) const {
        ribbonlim::ObjectiveConfig cfg;
        if (energy == "sadowsky")
            cfg.energy_kind = ribbonlim::EnergyKind::sadowsky;
        else if (energy == "wunderlich")
            cfg.energy_kind = ribbonlim::EnergyKind::wunderlich;
        else if (energy == "regularized")
            cfg.energy_kind = ribbonlim::EnergyKind::regularized;
        else
            throw CLI::ValidationError("--energy", "unknown energy kind: " + energy);
        cfg.eps = eps;
        cfg.kappa_m = kappa_m;
        cfg.penalty_speed = penalty_speed;
        cfg.penalty_length = penalty_length;
        cfg.barrier_kappa = barrier_kappa;
        cfg.quad = {common.quad_panels, common.quad_order};
        return cfg;
    }

    ordered_json to_json() const {
        ordered_json j;
        j["energy"] = energy;
        j["eps"] = eps;
        j["kappa_m"] = kappa_m;
        j["penalty_speed"] = penalty_speed;
        j["penalty_length"] = penalty_length;
        j["barrier_kappa"] = barrier_kappa;
        j["max_iter"] = max_iter;
        j["tol_grad"] = tol_grad;
        j["tol_rel_energy"] = tol_rel_energy;
        return j;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ribbonlim: bending energies of narrow inextensible ribbons over smooth "
                 "centerlines, their eps -> 0 limit, and desk-scale limit experiments"};
    app.require_subcommand(1);

    CommonOptions common;
    std::optional<fs::path> out_dir_for_errors;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out_dir, "output directory")->required();
        cmd->add_option("--quad-panels", common.quad_panels, "quadrature panels")
            ->check(CLI::Range(1, 4096));
        cmd->add_option("--quad-order", common.quad_order, "Gauss-Legendre nodes per panel")
            ->check(CLI::Range(4, 32));
        cmd->add_option("--seed", common.seed, "seed echoed into run_config.json");
    };

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "evaluate energies of a centerline");
    std::string eval_curve;
    double eval_eps = -1.0;
    double eval_kappa_m = 0.0;
    eval_cmd->add_option("--curve", eval_curve, "curve JSON file")->required();
    eval_cmd->add_option("--eps", eval_eps, "aspect ratio for the Wunderlich energy");
    eval_cmd->add_option("--kappa-m", eval_kappa_m, "also evaluate the regularized energy");
    add_common(eval_cmd);

    // ---- surface ----
    auto* surface_cmd = app.add_subcommand("surface", "build the rectifying developable ribbon");
    std::string surface_curve;
    double surface_eps = 0.1;
    int surface_ns = 128, surface_nv = 9;
    surface_cmd->add_option("--curve", surface_curve, "curve JSON file")->required();
    surface_cmd->add_option("--eps", surface_eps, "aspect ratio")->required();
    surface_cmd->add_option("--ns", surface_ns, "samples along the centerline")
        ->check(CLI::Range(16, 100000));
    surface_cmd->add_option("--nv", surface_nv, "samples across the width")
        ->check(CLI::Range(3, 1000));
    add_common(surface_cmd);

    // ---- minimize ----
    auto* min_cmd = app.add_subcommand("minimize", "minimize an energy over curve coefficients");
    std::string min_curve;
    SolveFlags solve_flags;
    bool min_normalize = false;
    min_cmd->add_option("--curve", min_curve, "starting curve JSON file")->required();
    min_cmd->add_option("--config", solve_flags.config_path, "solve config JSON file");
    min_cmd->add_option("--energy", solve_flags.energy, "sadowsky | wunderlich | regularized");
    min_cmd->add_option("--eps", solve_flags.eps, "aspect ratio (wunderlich)");
    min_cmd->add_option("--kappa-m", solve_flags.kappa_m, "curvature floor");
    min_cmd->add_option("--penalty-speed", solve_flags.penalty_speed, "uniform-speed penalty");
    min_cmd->add_option("--penalty-length", solve_flags.penalty_length, "unit-length penalty");
    min_cmd->add_option("--barrier-kappa", solve_flags.barrier_kappa, "log-barrier weight");
    min_cmd->add_option("--max-iter", solve_flags.max_iter, "iteration cap");
    min_cmd->add_option("--tol-grad", solve_flags.tol_grad, "gradient norm tolerance");
    min_cmd->add_option("--tol-rel-energy", solve_flags.tol_rel_energy,
                        "relative energy change tolerance");
    min_cmd->add_flag("--normalize-start", min_normalize,
                      "reparameterize and scale the start to unit length first");
    add_common(min_cmd);

    // ---- gamma-sweep ----
    auto* sweep_cmd = app.add_subcommand("gamma-sweep", "F_eps over an eps grid vs the limit");
    std::string sweep_curve, sweep_grid_text;
    sweep_cmd->add_option("--curve", sweep_curve, "curve JSON file")->required();
    sweep_cmd->add_option("--eps-grid", sweep_grid_text, "comma-separated decreasing eps values")
        ->required();
    add_common(sweep_cmd);

    // ---- minimizer-convergence ----
    auto* mc_cmd = app.add_subcommand("minimizer-convergence",
                                      "min F_eps across an eps grid vs the Sadowsky minimum");
    std::string mc_curve, mc_grid_text;
    SolveFlags mc_flags;
    mc_cmd->add_option("--curve", mc_curve, "starting curve JSON file")->required();
    mc_cmd->add_option("--eps-grid", mc_grid_text, "comma-separated decreasing eps values")
        ->required();
    mc_cmd->add_option("--config", mc_flags.config_path, "solve config JSON file");
    mc_cmd->add_option("--kappa-m", mc_flags.kappa_m, "curvature floor");
    mc_cmd->add_option("--barrier-kappa", mc_flags.barrier_kappa, "log-barrier weight");
    mc_cmd->add_option("--max-iter", mc_flags.max_iter, "iteration cap");
    mc_cmd->add_option("--tol-grad", mc_flags.tol_grad, "gradient norm tolerance");
    add_common(mc_cmd);

    // ---- lsc-probe ----
    auto* lsc_cmd = app.add_subcommand("lsc-probe", "lower-semicontinuity perturbation probe");
    std::string lsc_curve, lsc_kind = "torsion_oscillation";
    double lsc_amplitude = 0.01;
    int lsc_members = 6, lsc_frequency = 4;
    double lsc_kappa_m = 0.0;
    lsc_cmd->add_option("--curve", lsc_curve, "base curve JSON file")->required();
    lsc_cmd->add_option("--kind", lsc_kind, "torsion_oscillation | coefficient_oscillation");
    lsc_cmd->add_option("--amplitude", lsc_amplitude, "leading perturbation amplitude");
    lsc_cmd->add_option("--members", lsc_members, "sequence length")->check(CLI::Range(4, 64));
    lsc_cmd->add_option("--frequency", lsc_frequency, "leading oscillation frequency")
        ->check(CLI::Range(1, 512));
    lsc_cmd->add_option("--kappa-m", lsc_kappa_m,
                        "evaluate with the regularized energy (needed at inflection points)");
    add_common(lsc_cmd);

    // ---- make-curve ----
    auto* make_cmd = app.add_subcommand("make-curve", "generate a standard test centerline");
    std::string make_kind = "circle", make_file = "curve.json";
    double make_p1 = 0.0, make_p2 = 0.0;
    int make_harmonic = 2;
    make_cmd->add_option("--kind", make_kind,
                         "circle | ellipse | helix | wavy | single_zero | mobius_like | random")
        ->required();
    make_cmd->add_option("--p1", make_p1, "first shape parameter");
    make_cmd->add_option("--p2", make_p2, "second shape parameter");
    make_cmd->add_option("--harmonic", make_harmonic, "harmonic index (wavy)");
    make_cmd->add_option("--file", make_file, "output file name inside --out");
    add_common(make_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        ensure_out_dir(common.out_dir);
        out_dir_for_errors = fs::path(common.out_dir);
        const ribbonlim::QuadratureScheme quad(common.quad_panels, common.quad_order);
        const fs::path out(common.out_dir);

        if (*eval_cmd) {
            echo_run_config(common, "eval",
                            {{"curve", eval_curve}, {"eps", eval_eps}, {"kappa_m", eval_kappa_m}});
            const ribbonlim::CurveSpec curve = load_curve(eval_curve);
            ordered_json report;
            report["sadowsky"] =
                ribbonlim::energy_to_json(ribbonlim::sadowsky_energy(curve, quad), quad);
            if (eval_eps >= 0.0)
                report["wunderlich"] = ribbonlim::energy_to_json(
                    ribbonlim::wunderlich_energy(curve, eval_eps, quad), quad);
            if (eval_kappa_m > 0.0)
                report["regularized"] = ribbonlim::energy_to_json(
                    ribbonlim::regularized_sadowsky_energy(curve, eval_kappa_m, quad), quad);
            report["gamma_gap_prediction"] = ribbonlim::gamma_gap_prediction(curve, quad);
            ribbonlim::atomic_write_text(out / "energy_report.json",
                                         ribbonlim::to_json_text(report));
            ribbonlim::atomic_write_text(
                out / "nodes.csv",
                ribbonlim::frenet_csv(curve, quad, eval_eps >= 0.0 ? eval_eps : 0.0));
        } else if (*surface_cmd) {
            echo_run_config(common, "surface",
                            {{"curve", surface_curve},
                             {"eps", surface_eps},
                             {"ns", surface_ns},
                             {"nv", surface_nv}});
            const ribbonlim::CurveSpec curve = load_curve(surface_curve);
            const ribbonlim::RibbonMesh mesh =
                ribbonlim::build_mesh(curve, surface_eps, surface_ns, surface_nv);
            ribbonlim::atomic_write_text(out / "ribbon.obj", ribbonlim::mesh_to_obj(mesh));
            ribbonlim::atomic_write_text(out / "kappa1.csv", ribbonlim::kappa1_csv(mesh));
            ordered_json report;
            report["surface_energy"] = ribbonlim::energy_to_json(
                ribbonlim::surface_energy(curve, surface_eps, quad, {4, 16}), quad);
            report["wunderlich"] = ribbonlim::energy_to_json(
                ribbonlim::wunderlich_energy(curve, surface_eps, quad), quad);
            report["max_interior_angle_defect"] = ribbonlim::max_interior_angle_defect(mesh);
            ribbonlim::atomic_write_text(out / "surface_report.json",
                                         ribbonlim::to_json_text(report));
        } else if (*min_cmd) {
            solve_flags.load_file_defaults(min_cmd);
            echo_run_config(common, "minimize", solve_flags.to_json());
            ribbonlim::CurveSpec curve = load_curve(min_curve);
            if (min_normalize) curve = ribbonlim::normalize_to_unit_length(curve);
            const ribbonlim::ObjectiveConfig cfg = solve_flags.to_config(common);
            auto [final_curve, report] = ribbonlim::minimize(
                curve, cfg, solve_flags.max_iter, solve_flags.tol_grad, solve_flags.tol_rel_energy);
            ribbonlim::write_curve(out / "final_curve.json", final_curve);
            ribbonlim::atomic_write_text(out / "solve_report.json",
                                         ribbonlim::to_json_text(
                                             ribbonlim::solve_report_to_json(report, cfg.quad)));
            ribbonlim::atomic_write_text(out / "history.csv", ribbonlim::history_csv(report));
        } else if (*sweep_cmd) {
            echo_run_config(common, "gamma-sweep",
                            {{"curve", sweep_curve}, {"eps_grid", sweep_grid_text}});
            const ribbonlim::CurveSpec curve = load_curve(sweep_curve);
            const ribbonlim::SweepReport report =
                ribbonlim::eps_sweep(curve, parse_grid(sweep_grid_text), quad);
            ribbonlim::atomic_write_text(out / "sweep_report.json",
                                         ribbonlim::to_json_text(
                                             ribbonlim::sweep_to_json(report, quad)));
            ribbonlim::atomic_write_text(out / "sweep.csv", ribbonlim::sweep_csv(report));
        } else if (*mc_cmd) {
            mc_flags.load_file_defaults(mc_cmd);
            echo_run_config(common, "minimizer-convergence",
                            {{"curve", mc_curve}, {"eps_grid", mc_grid_text}});
            ribbonlim::CurveSpec curve = load_curve(mc_curve);
            ribbonlim::ObjectiveConfig cfg = mc_flags.to_config(common);
            const ribbonlim::MinimizerConvergenceReport report = ribbonlim::minimizer_convergence(
                curve, parse_grid(mc_grid_text), cfg, mc_flags.max_iter, mc_flags.tol_grad);
            ribbonlim::atomic_write_text(
                out / "minimizer_convergence.json",
                ribbonlim::to_json_text(ribbonlim::minimizer_convergence_to_json(report)));
        } else if (*lsc_cmd) {
            echo_run_config(common, "lsc-probe",
                            {{"curve", lsc_curve},
                             {"kind", lsc_kind},
                             {"amplitude", lsc_amplitude},
                             {"members", lsc_members},
                             {"frequency", lsc_frequency},
                             {"kappa_m", lsc_kappa_m}});
            const ribbonlim::CurveSpec curve = load_curve(lsc_curve);
            ribbonlim::PerturbationKind kind;
            if (lsc_kind == "torsion_oscillation")
                kind = ribbonlim::PerturbationKind::torsion_oscillation;
            else if (lsc_kind == "coefficient_oscillation")
                kind = ribbonlim::PerturbationKind::coefficient_oscillation;
            else
                throw CLI::ValidationError("--kind", "unknown perturbation kind: " + lsc_kind);
            const ribbonlim::ProbeSequence seq = ribbonlim::make_probe_sequence(
                curve, kind, lsc_amplitude, lsc_members, lsc_frequency);
            const ribbonlim::LscReport report = ribbonlim::lsc_probe(seq, quad, lsc_kappa_m);
            ribbonlim::atomic_write_text(out / "lsc_report.json",
                                         ribbonlim::to_json_text(
                                             ribbonlim::lsc_report_to_json(report)));
        } else if (*make_cmd) {
            echo_run_config(common, "make-curve",
                            {{"kind", make_kind},
                             {"p1", make_p1},
                             {"p2", make_p2},
                             {"harmonic", make_harmonic},
                             {"file", make_file}});
            std::optional<ribbonlim::CurveSpec> curve;
            if (make_kind == "circle") {
                curve = ribbonlim::make_circle(make_p1 > 0.0 ? make_p1 : 1.0 / (2.0 * M_PI));
            } else if (make_kind == "ellipse") {
                curve = ribbonlim::make_ellipse(make_p1 > 0.0 ? make_p1 : 1.5,
                                                make_p2 > 0.0 ? make_p2 : 1.0 / (2.0 * M_PI));
            } else if (make_kind == "helix") {
                curve = ribbonlim::make_unit_helix(make_p1 > 0.0 ? make_p1 : 0.5);
            } else if (make_kind == "wavy") {
                curve = ribbonlim::make_wavy_circle(make_p1 > 0.0 ? make_p1 : 0.12, make_harmonic);
            } else if (make_kind == "single_zero") {
                curve = ribbonlim::inflection_test_curve(ribbonlim::InflectionKind::single_zero,
                                                         make_p1, make_p2)
                            .curve;
            } else if (make_kind == "mobius_like") {
                curve = ribbonlim::inflection_test_curve(ribbonlim::InflectionKind::mobius_like,
                                                         make_p1, make_p2)
                            .curve;
            } else if (make_kind == "random") {
                curve = ribbonlim::make_random_closed(common.seed);
            } else {
                throw CLI::ValidationError("--kind", "unknown curve kind: " + make_kind);
            }
            ribbonlim::write_curve(out / make_file, *curve);
        }
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        write_error_json(out_dir_for_errors, "UsageError", "", e.what());
        return kExitUsage;
    } catch (const ribbonlim::inflection_error& e) {
        write_error_json(out_dir_for_errors, "InflectionPoint", ribbonlim::format_double(e.t()),
                         e.what());
        return kExitDomain;
    } catch (const ribbonlim::edge_of_regression_error& e) {
        write_error_json(out_dir_for_errors, "EdgeOfRegression",
                         "t=" + ribbonlim::format_double(e.t()) +
                             ",v=" + ribbonlim::format_double(e.v()),
                         e.what());
        return kExitDomain;
    } catch (const ribbonlim::no_descent_error& e) {
        write_error_json(out_dir_for_errors, "NoDescent", "", e.what());
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        write_error_json(out_dir_for_errors, "UsageError", "", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        write_error_json(out_dir_for_errors, "DomainError", "", e.what());
        return kExitDomain;
    }
}
