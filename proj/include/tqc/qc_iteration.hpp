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
#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tqc/beltrami.hpp"
#include "tqc/energy.hpp"
#include "tqc/format.hpp"
#include "tqc/lbs.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

/** More than this fraction of folded faces aborts an iteration. */
inline constexpr double kFoldErrorFraction = 0.1;

enum class Variant { simplified, full };

/**
 * The field update can smooth before projecting (emitted iterates are
 * exactly constant-modulus) or project before smoothing. By default both
 * variants smooth first, which every downstream consumer of the iterate
 * relies on; the swapped order is available for experimentation.
 */
enum class UpdateOrder { variant_default, smooth_then_project, project_then_smooth };

struct SolverParams {
    Variant variant = Variant::simplified;
    double alpha = 1.0;        // step damping, full variant only
    double smooth_lambda = 0.5;
    int smooth_passes = 1;
    int max_iter = 500;
    double tol_mu = 1e-6;      // sup-norm of the field step
    double tol_gap = 1e-8;     // gap relative to the initial gap
    double mu_cap = 0.9999;
    bool monotone_guard = true;
    UpdateOrder order = UpdateOrder::variant_default;

    void validate() const
    {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw SolverError("params: alpha must lie in (0,1]");
        if (!(smooth_lambda > 0.0 && smooth_lambda <= 1.0)) {
            throw SolverError("params: smooth_lambda must lie in (0,1]");
        }
        if (smooth_passes < 1) throw SolverError("params: smooth_passes must be positive");
        if (max_iter < 1) throw SolverError("params: max_iter must be positive");
        if (!(tol_mu > 0.0)) throw SolverError("params: tol_mu must be positive");
        if (!(tol_gap > 0.0)) throw SolverError("params: tol_gap must be positive");
        if (!(mu_cap > 0.0 && mu_cap < 1.0)) throw SolverError("params: mu_cap must lie in (0,1)");
    }
};

struct TraceRow {
    int iter = 0;
    double energy_gap = 0.0;
    double k = 0.0;
    double mu_std = 0.0;
    double step_inf = 0.0;
    double min_jacobian = 0.0;
};

struct IterationTrace {
    std::vector<TraceRow> rows;
    std::string termination;  // converged | max_iter | stalled
};

struct QcState {
    PiecewiseLinearMap map;
    BeltramiField mu;
};

struct SolveResult {
    PiecewiseLinearMap map;
    BeltramiField mu;
    IterationTrace trace;
    EnergyReport report;
};

namespace detail {

inline double min_jacobian_checked(const TriangleMesh& mesh, const PiecewiseLinearMap& map)
{
    auto jac = face_jacobians(mesh, map);
    double mn = std::numeric_limits<double>::infinity();
    int folds = 0;
    for (double j : jac) {
        mn = std::min(mn, j);
        folds += (j <= 0.0);
    }
    if (folds > kFoldErrorFraction * static_cast<double>(jac.size())) {
        throw SolverError("iterate folds on " + std::to_string(folds) + " of " +
                          std::to_string(jac.size()) + " faces");
    }
    return mn;
}

inline double step_sup_norm(const BeltramiField& a, const BeltramiField& b)
{
    double s = 0.0;
    for (std::size_t f = 0; f < a.values.size(); ++f) {
        s = std::max(s, std::abs(a.values[f] - b.values[f]));
    }
    return s;
}

/**
 * One field update from the freshly solved map: raw dilatation (simplified)
 * or damped auxiliary-metric composition (full), then smoothing and
 * projection in the configured order, then the admissibility clamp.
 */
inline BeltramiField update_field(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                                  const BeltramiField& mu_prev, const SolverParams& params,
                                  int passes, double alpha)
{
    BeltramiField raw;
    if (params.variant == Variant::simplified) {
        raw = beltrami_of_map(mesh, map);
    } else {
        auto aux = auxiliary_beltrami(mesh, map, mu_prev);
        raw.values.resize(aux.values.size());
        for (std::size_t f = 0; f < aux.values.size(); ++f) {
            raw.values[f] = mu_prev.values[f] + alpha * aux.values[f];
        }
    }
    const bool project_last = params.order != UpdateOrder::project_then_smooth;
    BeltramiField shaped =
        project_last
            ? project_constant_modulus(mesh, laplacian_smooth(mesh, raw, params.smooth_lambda, passes))
            : laplacian_smooth(mesh, project_constant_modulus(mesh, raw), params.smooth_lambda, passes);
    return clamp_modulus(shaped, params.mu_cap);
}

/**
 * Lyapunov gap of the pair (map, mu). Constant-modulus fields take the
 * scalar-prefactor identity via energy_gap; otherwise (project-then-smooth
 * order) the prefactor is applied per face.
 */
inline EnergyReport gap_report(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                               const BeltramiField& mu, double target_area)
{
    auto stats = dilation_stats(mu, mesh);
    if (stats.modulus_std <= kConstantModulusTol) {
        return energy_gap(mesh, map, mu, target_area);
    }
    auto d = wirtinger_derivatives(mesh, map);
    double gap = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const double m2 = std::norm(mu.values[f]);
        gap += 2.0 / (1.0 - m2) * mesh.face_areas[f] *
               std::norm(d.fzbar[f] - mu.values[f] * d.fz[f]);
    }
    EnergyReport r;
    r.k_modulus = stats.mean_modulus;
    r.target_area = target_area;
    r.energy_gap = gap;
    r.harmonic_energy = gap + target_area;
    return r;
}

}  // namespace detail

/** Zero field and its least-squares map: the harmonic extension of the constraints. */
inline QcState initialize(const TriangleMesh& mesh, const ConstraintSet& constraints)
{
    QcState s;
    s.mu = zero_field(mesh);
    s.map = solve(assemble(mesh, s.mu, constraints));
    return s;
}

/**
 * One iteration: solve the least-squares map for the current field, then
 * derive the next field from that map. Throws when the new map folds on
 * more than kFoldErrorFraction of the faces.
 */
inline QcState qc_step(const TriangleMesh& mesh, const ConstraintSet& constraints,
                       const SolverParams& params, const QcState& state)
{
    params.validate();
    QcState next;
    next.map = solve(assemble(mesh, state.mu, constraints));
    detail::min_jacobian_checked(mesh, next.map);
    next.mu = detail::update_field(mesh, next.map, state.mu, params, params.smooth_passes,
                                   params.alpha);
    return next;
}

/**
 * Runs the iteration to convergence. Terminates on a small field step, a
 * small relative gap, or max_iter. With the monotone guard, a gap increase
 * triggers one retry (stronger smoothing for the simplified variant, halved
 * alpha for the full variant); a second increase stops with "stalled" and
 * the best iterate seen is returned.
 */
inline SolveResult run(const TriangleMesh& mesh, const ConstraintSet& constraints,
                       const SolverParams& params,
                       const std::function<void(const TraceRow&)>& on_iteration = {})
{
    params.validate();

    SolveResult cur;
    cur.mu = zero_field(mesh);
    cur.map = solve(assemble(mesh, cur.mu, constraints));
    cur.report = detail::gap_report(mesh, cur.map, cur.mu, constraints.target_area);

    auto stats0 = dilation_stats(cur.mu, mesh);
    TraceRow row{0, cur.report.energy_gap, cur.report.k_modulus, stats0.modulus_std, 0.0,
                 detail::min_jacobian_checked(mesh, cur.map)};
    cur.trace.rows.push_back(row);
    if (on_iteration) on_iteration(row);

    const double gap0 = cur.report.energy_gap;
    const double guard_tol = kGapEpsRel * gap0;
    const double gap_floor = 1e-12 * constraints.target_area;

    SolveResult best = cur;
    if (cur.report.energy_gap <= gap_floor) {
        cur.trace.termination = "converged";
        return cur;
    }

    for (int n = 1; n <= params.max_iter; ++n) {
        auto mu_next =
            detail::update_field(mesh, cur.map, cur.mu, params, params.smooth_passes, params.alpha);
        auto map_next = solve(assemble(mesh, mu_next, constraints));
        auto rep_next = detail::gap_report(mesh, map_next, mu_next, constraints.target_area);

        if (params.monotone_guard && rep_next.energy_gap > cur.report.energy_gap + guard_tol) {
            // One retry with a tamer update.
            mu_next = params.variant == Variant::simplified
                          ? detail::update_field(mesh, cur.map, cur.mu, params,
                                                 params.smooth_passes + 1, params.alpha)
                          : detail::update_field(mesh, cur.map, cur.mu, params,
                                                 params.smooth_passes, 0.5 * params.alpha);
            map_next = solve(assemble(mesh, mu_next, constraints));
            rep_next = detail::gap_report(mesh, map_next, mu_next, constraints.target_area);
            if (rep_next.energy_gap > cur.report.energy_gap + guard_tol) {
                best.trace = cur.trace;
                best.trace.termination = "stalled";
                return best;
            }
        }

        const double min_jac = detail::min_jacobian_checked(mesh, map_next);
        const double step = detail::step_sup_norm(mu_next, cur.mu);
        auto stats = dilation_stats(mu_next, mesh);

        cur.map = std::move(map_next);
        cur.mu = std::move(mu_next);
        cur.report = rep_next;
        row = TraceRow{n, rep_next.energy_gap, rep_next.k_modulus, stats.modulus_std, step, min_jac};
        cur.trace.rows.push_back(row);
        if (on_iteration) on_iteration(row);

        if (cur.report.energy_gap <= best.report.energy_gap) {
            best.map = cur.map;
            best.mu = cur.mu;
            best.report = cur.report;
        }
        if (step <= params.tol_mu || cur.report.energy_gap <= params.tol_gap * gap0 ||
            cur.report.energy_gap <= gap_floor) {
            cur.trace.termination = "converged";
            return cur;
        }
    }

    best.trace = cur.trace;
    best.trace.termination = "max_iter";
    return best;
}

/** Trace CSV: `iter,energy_gap,k,mu_std,step_inf,min_jacobian`, round-trip exact. */
inline void write_trace_csv(const std::string& path, const IterationTrace& trace)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "iter,energy_gap,k,mu_std,step_inf,min_jacobian\n";
    for (const auto& r : trace.rows) {
        out << r.iter << "," << format_double(r.energy_gap) << "," << format_double(r.k) << ","
            << format_double(r.mu_std) << "," << format_double(r.step_inf) << ","
            << format_double(r.min_jacobian) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline IterationTrace read_trace_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace CSV: " + path);
    IterationTrace trace;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!saw_header) {
            if (t != "iter,energy_gap,k,mu_std,step_inf,min_jacobian") {
                throw IoError(path + ": unexpected trace header");
            }
            saw_header = true;
            continue;
        }
        auto cols = split_csv(t);
        if (cols.size() != 6) throw IoError(path + ": trace row needs 6 columns");
        TraceRow r;
        r.iter = static_cast<int>(parse_long(cols[0]));
        r.energy_gap = parse_double(cols[1]);
        r.k = parse_double(cols[2]);
        r.mu_std = parse_double(cols[3]);
        r.step_inf = parse_double(cols[4]);
        r.min_jacobian = parse_double(cols[5]);
        trace.rows.push_back(r);
    }
    return trace;
}

}  // namespace tqc
