/*
 * tqc: extremal quasiconformal (Teichmueller) maps on planar triangle meshes
 *
 * Copyright 2026 The tqc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>

#include "tqc/tqc.hpp"

namespace {

struct RunConfig {
    std::string mesh_path;
    std::string constraints_path;
    std::string out_path;
    std::string trace_path;
    std::string diag_path;
    std::string map_path;  // check only
    std::string mu_path;   // check only, optional
    tqc::SolverParams params;
    std::string variant = "simplified";
    int bins = 50;
    int verbosity = 0;
};

void apply_thread_cap()
{
    if (const char* env = std::getenv("TQC_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) Eigen::setNbThreads(static_cast<int>(n));
    }
}

void require_distinct_paths(const RunConfig& cfg)
{
    std::set<std::string> seen;
    for (const std::string& p : {cfg.mesh_path, cfg.constraints_path, cfg.out_path,
                                 cfg.trace_path, cfg.diag_path, cfg.map_path}) {
        if (p.empty()) continue;
        if (!seen.insert(p).second) {
            throw tqc::IoError("paths must be distinct, '" + p + "' given twice");
        }
    }
}

std::string mu_sidecar_path(const std::string& out_path)
{
    std::filesystem::path p(out_path);
    p.replace_extension();
    return p.string() + ".mu.csv";
}

void print_warnings(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_solve(const RunConfig& cfg)
{
    require_distinct_paths(cfg);
    std::vector<std::string> warnings;
    auto mesh = tqc::load_mesh(cfg.mesh_path, &warnings);
    print_warnings(warnings);
    auto constraints = tqc::load_constraints(cfg.constraints_path, mesh, true);

    tqc::SolverParams params = cfg.params;
    params.variant = cfg.variant == "full" ? tqc::Variant::full : tqc::Variant::simplified;
    params.validate();

    auto res = tqc::run(mesh, constraints, params, [&](const tqc::TraceRow& row) {
        if (cfg.verbosity > 0) {
            std::cerr << "iter " << row.iter << "  gap " << tqc::format_double(row.energy_gap)
                      << "  k " << tqc::format_double(row.k) << "  step "
                      << tqc::format_double(row.step_inf) << "\n";
        }
    });

    if (!cfg.out_path.empty()) {
        tqc::write_off(cfg.out_path, res.map.values, mesh.faces);
        tqc::write_beltrami_csv(mu_sidecar_path(cfg.out_path), res.mu);
    }
    if (!cfg.trace_path.empty()) tqc::write_trace_csv(cfg.trace_path, res.trace);
    if (!cfg.diag_path.empty()) {
        auto rep = tqc::build_diagnostics(mesh, res.map, res.mu, cfg.bins);
        tqc::write_report(rep, cfg.diag_path);
    }

    std::cout << "termination: " << res.trace.termination << "\n"
              << "iterations:  " << res.trace.rows.size() - 1 << "\n"
              << "energy gap:  " << tqc::format_double(res.report.energy_gap) << "\n"
              << "k:           " << tqc::format_double(res.report.k_modulus) << "\n";
    return res.trace.termination == "converged" ? 0 : 2;
}

int cmd_check(const RunConfig& cfg)
{
    std::vector<std::string> warnings;
    auto mesh = tqc::load_mesh(cfg.mesh_path, &warnings);
    print_warnings(warnings);
    auto constraints = tqc::load_constraints(cfg.constraints_path, mesh, true);
    auto map = tqc::load_map_off(cfg.map_path, mesh);

    tqc::BeltramiField mu = cfg.mu_path.empty()
                                ? tqc::project_constant_modulus(
                                      mesh, tqc::beltrami_of_map(mesh, map))
                                : tqc::read_beltrami_csv(cfg.mu_path, mesh);

    auto rep = tqc::energy_gap(mesh, map, mu, constraints.target_area);
    std::size_t violations = 0;
    double worst = 0.0;
    auto inspect = [&](const std::vector<std::pair<int, tqc::Complex>>& rows) {
        for (const auto& [v, w] : rows) {
            if (map.values[v] != w) ++violations;
            worst = std::max(worst, std::abs(map.values[v] - w));
        }
    };
    inspect(constraints.boundary);
    inspect(constraints.landmarks);

    auto diag = tqc::build_diagnostics(mesh, map, mu, cfg.bins);
    if (!cfg.diag_path.empty()) tqc::write_report(diag, cfg.diag_path);

    const bool bound_ok = tqc::lower_bound_check(rep);
    std::cout << "energy gap:          " << tqc::format_double(rep.energy_gap) << "\n"
              << "k:                   " << tqc::format_double(rep.k_modulus) << "\n"
              << "lower bound:         " << (bound_ok ? "ok" : "VIOLATED") << "\n"
              << "constraint mismatches: " << violations << " (max deviation "
              << tqc::format_double(worst) << ")\n"
              << "fold count:          " << diag.fold_count << "\n"
              << "arg-laplacian median: " << tqc::format_double(diag.arg_laplacian_median_abs)
              << "\n"
              << "hopf residual:       " << tqc::format_double(diag.hopf_residual_norm) << "\n";
    return (violations == 0 && bound_ok) ? 0 : 1;
}

int cmd_make_testcase(const std::string& name, int size, const std::string& out_dir)
{
    auto tc = tqc::make_testcase(name, size);
    std::filesystem::create_directories(out_dir);
    const auto base = std::filesystem::path(out_dir) / name;
    const std::string mesh_path = base.string() + ".off";
    const std::string csv_path = base.string() + ".csv";
    tqc::write_off(mesh_path, tc.mesh.vertices, tc.mesh.faces);
    tqc::write_constraints_csv(csv_path, tc.constraints);
    std::cout << mesh_path << "\n" << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    apply_thread_cap();

    CLI::App app{"extremal quasiconformal (Teichmueller) map solver for planar triangle meshes"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_param_flags = [&cfg](CLI::App* cmd) {
        cmd->add_option("--variant", cfg.variant, "iteration variant")
            ->check(CLI::IsMember({"full", "simplified"}))
            ->capture_default_str();
        cmd->add_option("--alpha", cfg.params.alpha, "step damping (full variant)")
            ->capture_default_str();
        cmd->add_option("--smooth-lambda", cfg.params.smooth_lambda, "smoothing damping")
            ->capture_default_str();
        cmd->add_option("--smooth-passes", cfg.params.smooth_passes, "smoothing passes")
            ->capture_default_str();
        cmd->add_option("--max-iter", cfg.params.max_iter, "iteration cap")
            ->capture_default_str();
        cmd->add_option("--tol-mu", cfg.params.tol_mu, "sup-norm step tolerance")
            ->capture_default_str();
        cmd->add_option("--tol-gap", cfg.params.tol_gap, "relative gap tolerance")
            ->capture_default_str();
        cmd->add_option("--mu-cap", cfg.params.mu_cap, "admissibility cap")
            ->capture_default_str();
    };

    auto* solve = app.add_subcommand("solve", "compute the extremal map for mesh + constraints");
    solve->add_option("--mesh", cfg.mesh_path, "source mesh (OFF/OBJ)")->required();
    solve->add_option("--constraints", cfg.constraints_path, "constraint CSV")->required();
    solve->add_option("--out", cfg.out_path, "mapped mesh output (OFF)");
    solve->add_option("--trace", cfg.trace_path, "iteration trace CSV");
    solve->add_option("--diag", cfg.diag_path, "diagnostics JSON (+ CSV sidecars)");
    solve->add_option("--bins", cfg.bins, "histogram bins")->capture_default_str();
    add_param_flags(solve);
    solve->add_flag("-v", cfg.verbosity, "verbose progress on stderr");

    auto* check = app.add_subcommand("check", "verify a solved map against its inputs");
    check->add_option("--mesh", cfg.mesh_path, "source mesh (OFF/OBJ)")->required();
    check->add_option("--constraints", cfg.constraints_path, "constraint CSV")->required();
    check->add_option("--map", cfg.map_path, "solved map (OFF)")->required();
    check->add_option("--mu", cfg.mu_path, "solved field CSV (defaults to reprojecting the map)");
    check->add_option("--diag", cfg.diag_path, "diagnostics JSON (+ CSV sidecars)");
    check->add_option("--bins", cfg.bins, "histogram bins")->capture_default_str();
    check->add_flag("-v", cfg.verbosity, "verbose progress on stderr");

    std::string tc_name;
    int tc_size = 2048;
    std::string tc_dir = ".";
    auto* mk = app.add_subcommand("make-testcase", "generate a bundled test case");
    mk->add_option("name", tc_name, "affine|identity|landmarks|annulus")->required();
    mk->add_option("size", tc_size, "approximate face count")->capture_default_str();
    mk->add_option("--out-dir", tc_dir, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (check->parsed()) return cmd_check(cfg);
        if (mk->parsed()) return cmd_make_testcase(tc_name, tc_size, tc_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
