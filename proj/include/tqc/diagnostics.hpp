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
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqc/beltrami.hpp"
#include "tqc/format.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

/** Area-weighted histogram over [0,1): `mass[i]` covers [edges[i], edges[i+1]). */
struct Histogram {
    std::vector<double> edges;  // bins + 1 entries
    std::vector<double> mass;   // sums to the total mesh area
};

/**
 * Post-hoc quality summary of a solved map. The modulus histogram and the
 * argument Laplacian describe how close the map's own dilatation field is
 * to Teichmueller form (constant modulus, harmonic argument); the Hopf
 * residual measures auxiliary-metric conformality; folds count orientation
 * reversals.
 */
struct DiagnosticsReport {
    Histogram modulus_histogram;
    std::vector<int> arg_faces;          // faces the Laplacian was evaluated on
    std::vector<double> arg_laplacian;   // parallel to arg_faces
    double arg_laplacian_median_abs = 0.0;
    int arg_excluded_count = 0;
    double hopf_residual_norm = 0.0;
    double min_jacobian = 0.0;
    int fold_count = 0;
};

/** Area-weighted histogram of |mu| with `bins` equal-width bins on [0,1). */
inline Histogram modulus_histogram(const TriangleMesh& mesh, const BeltramiField& mu, int bins)
{
    detail::require_field_size(mesh, mu, "modulus_histogram");
    if (bins < 1) throw SolverError("modulus_histogram: bins must be positive");
    Histogram h;
    h.edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) h.edges[i] = static_cast<double>(i) / bins;
    h.mass.assign(bins, 0.0);
    for (int f = 0; f < mesh.face_count(); ++f) {
        const double m = std::abs(mu.values[f]);
        const int idx = std::min(bins - 1, static_cast<int>(m * bins));
        h.mass[idx] += mesh.face_areas[f];
    }
    return h;
}

namespace detail {

// Principal-value angle difference in (-pi, pi].
inline double angle_difference(double a, double b)
{
    double d = a - b;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
}

}  // namespace detail

/**
 * Dual-graph Laplacian of arg(mu): per face, the area-weighted mean of the
 * unwrapped argument differences to its edge neighbors. Faces without
 * neighbors, with |mu| <= kDirEps, or adjacent to such a face are excluded
 * and counted. Identically zero for constant-argument fields.
 */
inline void arg_laplacian_stats(const TriangleMesh& mesh, const BeltramiField& mu,
                                std::vector<int>& faces, std::vector<double>& values,
                                double& median_abs, int& excluded)
{
    detail::require_field_size(mesh, mu, "arg_laplacian_stats");
    faces.clear();
    values.clear();
    excluded = 0;
    for (int f = 0; f < mesh.face_count(); ++f) {
        bool usable = std::abs(mu.values[f]) > kDirEps;
        bool has_neighbor = false;
        if (usable) {
            for (int n : mesh.face_neighbors[f]) {
                if (n < 0) continue;
                has_neighbor = true;
                if (std::abs(mu.values[n]) <= kDirEps) {
                    usable = false;
                    break;
                }
            }
        }
        if (!usable || !has_neighbor) {
            ++excluded;
            continue;
        }
        const double own = std::arg(mu.values[f]);
        double acc = 0.0, wsum = 0.0;
        for (int n : mesh.face_neighbors[f]) {
            if (n < 0) continue;
            acc += mesh.face_areas[n] * detail::angle_difference(std::arg(mu.values[n]), own);
            wsum += mesh.face_areas[n];
        }
        faces.push_back(f);
        values.push_back(acc / wsum);
    }
    if (values.empty()) {
        median_abs = 0.0;
        return;
    }
    std::vector<double> mags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
    auto mid = mags.begin() + mags.size() / 2;
    std::nth_element(mags.begin(), mid, mags.end());
    median_abs = *mid;
}

/**
 * Area-weighted L1 norm of the Hopf-differential density in the auxiliary
 * coordinate of `mu`: per face |f_zeta * conj(f_zetabar)| with
 * f_zetabar = fzbar - mu fz and f_zeta = (fz - conj(mu) fzbar)/(1 - |mu|^2).
 * Vanishes together with the least-squares residual.
 */
inline double hopf_residual(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                            const BeltramiField& mu)
{
    detail::require_field_size(mesh, mu, "hopf_residual");
    auto d = wirtinger_derivatives(mesh, map);
    double total = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const double m2 = std::norm(mu.values[f]);
        if (!(m2 < 1.0)) throw SolverError("hopf_residual: |mu| must stay below 1");
        const Complex fzeta = (d.fz[f] - std::conj(mu.values[f]) * d.fzbar[f]) / (1.0 - m2);
        const Complex fzetabar = d.fzbar[f] - mu.values[f] * d.fz[f];
        total += mesh.face_areas[f] * std::abs(fzeta * std::conj(fzetabar));
    }
    return total;
}

/**
 * Full report for a solved map. Histogram and argument statistics describe
 * the map's own dilatation field (recomputed here); the Hopf residual is
 * taken against `mu_star`, the constant-modulus field the map was solved
 * for.
 */
inline DiagnosticsReport build_diagnostics(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                                           const BeltramiField& mu_star, int bins = 50)
{
    DiagnosticsReport r;
    auto raw = beltrami_of_map(mesh, map);
    r.modulus_histogram = modulus_histogram(mesh, raw, bins);
    arg_laplacian_stats(mesh, raw, r.arg_faces, r.arg_laplacian, r.arg_laplacian_median_abs,
                        r.arg_excluded_count);
    r.hopf_residual_norm = hopf_residual(mesh, map, mu_star);
    auto jac = face_jacobians(mesh, map);
    r.min_jacobian = *std::min_element(jac.begin(), jac.end());
    r.fold_count = static_cast<int>(std::count_if(jac.begin(), jac.end(),
                                                  [](double j) { return j <= 0.0; }));
    return r;
}

/**
 * Emits the scalar report as JSON at `json_path` plus two CSV sidecars next
 * to it: `<stem>.hist.csv` (bin_lo,bin_hi,mass) and `<stem>.arglap.csv`
 * (face,value). All numbers round-trip exactly.
 */
inline void write_report(const DiagnosticsReport& report, const std::string& json_path)
{
    std::string stem = json_path;
    if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") {
        stem = stem.substr(0, stem.size() - 5);
    }
    const std::string hist_path = stem + ".hist.csv";
    const std::string arglap_path = stem + ".arglap.csv";

    nlohmann::json j;
    j["arg_laplacian_median_abs"] = report.arg_laplacian_median_abs;
    j["arg_excluded_count"] = report.arg_excluded_count;
    j["hopf_residual_norm"] = report.hopf_residual_norm;
    j["min_jacobian"] = report.min_jacobian;
    j["fold_count"] = report.fold_count;
    j["bins"] = report.modulus_histogram.mass.size();
    j["histogram_csv"] = hist_path;
    j["arg_laplacian_csv"] = arglap_path;
    {
        std::ofstream out(json_path);
        if (!out) throw IoError("cannot open for writing: " + json_path);
        out << j.dump(2) << "\n";
        if (!out) throw IoError("write failed: " + json_path);
    }
    {
        std::ofstream out(hist_path);
        if (!out) throw IoError("cannot open for writing: " + hist_path);
        out << "bin_lo,bin_hi,mass\n";
        for (std::size_t i = 0; i < report.modulus_histogram.mass.size(); ++i) {
            out << format_double(report.modulus_histogram.edges[i]) << ","
                << format_double(report.modulus_histogram.edges[i + 1]) << ","
                << format_double(report.modulus_histogram.mass[i]) << "\n";
        }
        if (!out) throw IoError("write failed: " + hist_path);
    }
    {
        std::ofstream out(arglap_path);
        if (!out) throw IoError("cannot open for writing: " + arglap_path);
        out << "face,value\n";
        for (std::size_t i = 0; i < report.arg_faces.size(); ++i) {
            out << report.arg_faces[i] << "," << format_double(report.arg_laplacian[i]) << "\n";
        }
        if (!out) throw IoError("write failed: " + arglap_path);
    }
}

/** Reads back a histogram sidecar; inverse of the write_report emission. */
inline Histogram read_histogram_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open histogram CSV: " + path);
    Histogram h;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty()) continue;
        if (!saw_header) {
            if (t != "bin_lo,bin_hi,mass") throw IoError(path + ": unexpected histogram header");
            saw_header = true;
            continue;
        }
        auto cols = split_csv(t);
        if (cols.size() != 3) throw IoError(path + ": histogram row needs 3 columns");
        if (h.edges.empty()) h.edges.push_back(parse_double(cols[0]));
        h.edges.push_back(parse_double(cols[1]));
        h.mass.push_back(parse_double(cols[2]));
    }
    return h;
}

}  // namespace tqc
