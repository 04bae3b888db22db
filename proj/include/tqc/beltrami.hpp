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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "tqc/format.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

/** Default admissibility cap: every iterate keeps |mu| <= cap < 1. */
inline constexpr double kMuCapDefault = 0.9999;
/** Moduli at or below this have no usable direction mu/|mu|. */
inline constexpr double kDirEps = 1e-14;
/** |fz| at or below this marks a folded or conformally degenerate face. */
inline constexpr double kDerivEps = 1e-12;

/**
 * Per-face complex dilatation. Piecewise constant on faces; a map is
 * conformal exactly where its field vanishes, and fields of constant
 * modulus are the Teichmueller-type candidates the iteration walks on.
 */
struct BeltramiField {
    std::vector<Complex> values;

    int size() const { return static_cast<int>(values.size()); }

    double max_modulus() const
    {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

inline BeltramiField zero_field(const TriangleMesh& mesh)
{
    BeltramiField f;
    f.values.assign(mesh.faces.size(), Complex(0.0, 0.0));
    return f;
}

inline BeltramiField constant_field(const TriangleMesh& mesh, Complex value)
{
    BeltramiField f;
    f.values.assign(mesh.faces.size(), value);
    return f;
}

/** Modulus statistics of a field; mean and std are area-weighted. */
struct DilationStats {
    double max_modulus = 0.0;
    double mean_modulus = 0.0;
    double modulus_std = 0.0;
    double K = 1.0;  // (1 + max) / (1 - max)
};

namespace detail {

inline void require_field_size(const TriangleMesh& mesh, const BeltramiField& field,
                               const char* op)
{
    if (field.size() != mesh.face_count()) {
        throw SolverError(std::string(op) + ": field has " + std::to_string(field.size()) +
                          " values for " + std::to_string(mesh.face_count()) + " faces");
    }
}

}  // namespace detail

/** mu = fzbar / fz per face; the complex dilatation of the map. */
inline BeltramiField beltrami_of_map(const TriangleMesh& mesh, const PiecewiseLinearMap& map)
{
    auto d = wirtinger_derivatives(mesh, map);
    BeltramiField mu;
    mu.values.resize(d.fz.size());
    for (std::size_t f = 0; f < d.fz.size(); ++f) {
        if (std::abs(d.fz[f]) <= kDerivEps) {
            throw SolverError("beltrami_of_map: |fz| vanishes on face " + std::to_string(f) +
                              " (folded or conformally degenerate)");
        }
        mu.values[f] = d.fzbar[f] / d.fz[f];
    }
    return mu;
}

/**
 * Complex dilatation of `map` measured in the conformal coordinate of the
 * auxiliary metric |dz + nu dzbar|^2:
 *
 *   mu(f, nu) = (fzbar - nu fz) / (fz - conj(nu) fzbar).
 *
 * It vanishes exactly where the map's own dilatation equals nu, and reduces
 * to beltrami_of_map for nu = 0.
 */
inline BeltramiField auxiliary_beltrami(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                                        const BeltramiField& nu)
{
    detail::require_field_size(mesh, nu, "auxiliary_beltrami");
    auto d = wirtinger_derivatives(mesh, map);
    BeltramiField mu;
    mu.values.resize(d.fz.size());
    for (std::size_t f = 0; f < d.fz.size(); ++f) {
        const Complex denom = d.fz[f] - std::conj(nu.values[f]) * d.fzbar[f];
        if (std::abs(denom) <= kDerivEps) {
            throw SolverError("auxiliary_beltrami: degenerate denominator on face " +
                              std::to_string(f));
        }
        mu.values[f] = (d.fzbar[f] - nu.values[f] * d.fz[f]) / denom;
    }
    return mu;
}

inline DilationStats dilation_stats(const BeltramiField& field, const TriangleMesh& mesh)
{
    detail::require_field_size(mesh, field, "dilation_stats");
    DilationStats s;
    double m1 = 0.0;
    for (int f = 0; f < field.size(); ++f) {
        const double m = std::abs(field.values[f]);
        s.max_modulus = std::max(s.max_modulus, m);
        m1 += mesh.face_areas[f] * m;
    }
    m1 /= mesh.total_area;
    // Two-pass variance: the shifted form keeps constant fields at std ~ eps.
    double var = 0.0;
    for (int f = 0; f < field.size(); ++f) {
        const double d = std::abs(field.values[f]) - m1;
        var += mesh.face_areas[f] * d * d;
    }
    s.mean_modulus = m1;
    s.modulus_std = std::sqrt(var / mesh.total_area);
    s.K = (1.0 + s.max_modulus) / (1.0 - s.max_modulus);
    return s;
}

/**
 * Projects onto constant-modulus fields: the common modulus is the
 * area-weighted mean of |mu| and per-face arguments are preserved. Faces
 * with |mu| <= kDirEps have no direction and map to zero.
 */
inline BeltramiField project_constant_modulus(const TriangleMesh& mesh, const BeltramiField& field)
{
    detail::require_field_size(mesh, field, "project_constant_modulus");
    double k = 0.0;
    for (int f = 0; f < field.size(); ++f) {
        k += mesh.face_areas[f] * std::abs(field.values[f]);
    }
    k /= mesh.total_area;
    BeltramiField out;
    out.values.resize(field.values.size());
    for (std::size_t f = 0; f < field.values.size(); ++f) {
        const double m = std::abs(field.values[f]);
        out.values[f] = (m > kDirEps) ? k * field.values[f] / m : Complex(0.0, 0.0);
    }
    return out;
}

/**
 * Damped dual-graph smoothing: per pass, each face moves toward the
 * area-weighted mean of its edge neighbors by factor lambda. Faces without
 * neighbors are left alone. Constant fields are fixed points and the update
 * never leaves the per-component range of {self} + neighbors.
 */
inline BeltramiField laplacian_smooth(const TriangleMesh& mesh, const BeltramiField& field,
                                      double lambda, int passes)
{
    detail::require_field_size(mesh, field, "laplacian_smooth");
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw SolverError("laplacian_smooth: lambda must lie in (0,1]");
    }
    if (passes < 1) throw SolverError("laplacian_smooth: passes must be positive");
    std::vector<Complex> cur = field.values;
    std::vector<Complex> next(cur.size());
    for (int p = 0; p < passes; ++p) {
        for (std::size_t f = 0; f < cur.size(); ++f) {
            Complex acc = 0.0;
            double wsum = 0.0;
            for (int n : mesh.face_neighbors[f]) {
                if (n < 0) continue;
                acc += mesh.face_areas[n] * cur[n];
                wsum += mesh.face_areas[n];
            }
            next[f] = (wsum > 0.0) ? (1.0 - lambda) * cur[f] + lambda * (acc / wsum) : cur[f];
        }
        cur.swap(next);
    }
    BeltramiField out;
    out.values = std::move(cur);
    return out;
}

/** Rescales values with |mu| > cap to modulus cap, keeping their argument. */
inline BeltramiField clamp_modulus(const BeltramiField& field, double cap)
{
    if (!(cap > 0.0 && cap < 1.0)) throw SolverError("clamp_modulus: cap must lie in (0,1)");
    BeltramiField out;
    out.values.resize(field.values.size());
    for (std::size_t f = 0; f < field.values.size(); ++f) {
        const double m = std::abs(field.values[f]);
        out.values[f] = (m > cap) ? field.values[f] * (cap / m) : field.values[f];
    }
    return out;
}

/** CSV interchange: header `face_index,re,im`, round-trip exact. */
inline void write_beltrami_csv(const std::string& path, const BeltramiField& field)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "face_index,re,im\n";
    for (std::size_t f = 0; f < field.values.size(); ++f) {
        out << f << "," << format_double(field.values[f].real()) << ","
            << format_double(field.values[f].imag()) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

inline BeltramiField read_beltrami_csv(const std::string& path, const TriangleMesh& mesh)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open beltrami CSV: " + path);
    BeltramiField field;
    field.values.assign(mesh.faces.size(), Complex(0.0, 0.0));
    std::vector<char> seen(mesh.faces.size(), 0);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!saw_header) {
            if (t != "face_index,re,im") {
                throw IoError(path + ": expected header 'face_index,re,im'");
            }
            saw_header = true;
            continue;
        }
        auto cols = split_csv(t);
        if (cols.size() != 3) throw IoError(path + ": row needs 3 columns");
        const long f = parse_long(cols[0]);
        if (f < 0 || f >= mesh.face_count()) {
            throw IoError(path + ": face index " + std::to_string(f) + " out of range");
        }
        if (seen[f]) throw IoError(path + ": duplicate face index " + std::to_string(f));
        seen[f] = 1;
        field.values[f] = Complex(parse_double(cols[1]), parse_double(cols[2]));
    }
    for (int f = 0; f < mesh.face_count(); ++f) {
        if (!seen[f]) throw IoError(path + ": missing face index " + std::to_string(f));
    }
    return field;
}

}  // namespace tqc
