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
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tqc/exceptions.hpp"

namespace tqc {

using Complex = std::complex<double>;

/** Faces below kAreaEpsRel times the mean face area are rejected. */
inline constexpr double kAreaEpsRel = 1e-10;

/**
 * Immutable planar triangle mesh.
 *
 * Vertices are points of the complex plane; faces are counterclockwise
 * vertex-index triples. Connectivity (edge-neighbor faces, boundary loops)
 * and face areas are derived once by build_mesh(). Treat instances as
 * read-only after construction; all operations in this library are pure
 * functions over them.
 */
struct TriangleMesh {
    std::vector<Complex> vertices;
    std::vector<std::array<int, 3>> faces;

    // Derived by build_mesh().
    std::vector<double> face_areas;                   // strictly positive
    std::vector<std::array<int, 3>> face_neighbors;   // across edge opposite corner j; -1 on boundary
    std::vector<std::vector<int>> boundary_loops;     // ordered, domain on the left
    std::vector<char> vertex_on_boundary;
    double total_area = 0.0;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
};

/** One complex target position per mesh vertex. */
struct PiecewiseLinearMap {
    std::vector<Complex> values;
};

/** Per-face Wirtinger derivatives of a piecewise-linear map. */
struct FaceDerivatives {
    std::vector<Complex> fz;
    std::vector<Complex> fzbar;
};

/**
 * Dirichlet data: boundary correspondence, interior landmarks, and the
 * target-domain area used for energy reporting.
 */
struct ConstraintSet {
    std::vector<std::pair<int, Complex>> boundary;
    std::vector<std::pair<int, Complex>> landmarks;
    double target_area = 0.0;

    std::size_t size() const { return boundary.size() + landmarks.size(); }
};

inline double signed_area(const Complex& a, const Complex& b, const Complex& c)
{
    return 0.5 * std::imag(std::conj(b - a) * (c - a));
}

/** Signed shoelace area of a closed polygon (positive when counterclockwise). */
inline double polygon_area(const std::vector<Complex>& loop)
{
    double a = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        a += std::imag(std::conj(loop[i]) * loop[(i + 1) % n]);
    }
    return 0.5 * a;
}

namespace detail {

struct EdgeKey {
    int lo, hi;
    bool operator<(const EdgeKey& o) const { return lo != o.lo ? lo < o.lo : hi < o.hi; }
};

struct EdgeUse {
    int face = -1;
    int corner = -1;  // edge is opposite this corner
};

struct EdgeTable {
    std::map<EdgeKey, std::array<EdgeUse, 2>> edges;  // at most two incident faces

    static EdgeTable build(const std::vector<std::array<int, 3>>& faces)
    {
        EdgeTable t;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            for (int c = 0; c < 3; ++c) {
                int a = faces[f][(c + 1) % 3];
                int b = faces[f][(c + 2) % 3];
                EdgeKey key{std::min(a, b), std::max(a, b)};
                auto& uses = t.edges[key];
                if (uses[0].face < 0) {
                    uses[0] = EdgeUse{f, c};
                } else if (uses[1].face < 0) {
                    uses[1] = EdgeUse{f, c};
                } else {
                    throw MeshError("non-manifold edge (" + std::to_string(key.lo) + "," +
                                    std::to_string(key.hi) + ") with more than two incident faces");
                }
            }
        }
        return t;
    }
};

// Walks directed boundary edges (in face orientation) into closed loops.
inline std::vector<std::vector<int>> trace_boundary_loops(
    const std::vector<std::array<int, 3>>& faces, const EdgeTable& table)
{
    // Directed boundary edge a->b as it appears in its unique face.
    std::map<int, int> next;  // a -> b
    for (const auto& [key, uses] : table.edges) {
        if (uses[1].face >= 0) continue;
        const auto& f = faces[uses[0].face];
        int c = uses[0].corner;
        int a = f[(c + 1) % 3];
        int b = f[(c + 2) % 3];
        if (next.count(a)) {
            throw MeshError("non-manifold boundary at vertex " + std::to_string(a));
        }
        next[a] = b;
    }
    std::vector<std::vector<int>> loops;
    std::map<int, bool> visited;
    for (const auto& [start, unused] : next) {
        if (visited.count(start)) continue;
        std::vector<int> loop;
        int v = start;
        do {
            loop.push_back(v);
            visited[v] = true;
            auto it = next.find(v);
            if (it == next.end()) {
                throw MeshError("open boundary chain at vertex " + std::to_string(v));
            }
            v = it->second;
        } while (v != start);
        loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace detail

/**
 * Validates connectivity and geometry and derives areas, adjacency, and
 * boundary loops. Clockwise faces are reoriented (recorded in `warnings`);
 * degenerate faces, bad indices, and non-manifold edges throw MeshError.
 */
inline TriangleMesh build_mesh(std::vector<Complex> vertices,
                               std::vector<std::array<int, 3>> faces,
                               std::vector<std::string>* warnings = nullptr)
{
    if (vertices.size() < 3 || faces.empty()) {
        throw MeshError("mesh must have at least 3 vertices and 1 face");
    }
    const int nv = static_cast<int>(vertices.size());
    for (const auto& v : vertices) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw MeshError("non-finite vertex position");
        }
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& t = faces[f];
        for (int c = 0; c < 3; ++c) {
            if (t[c] < 0 || t[c] >= nv) {
                throw MeshError("face " + std::to_string(f) + " references vertex " +
                                std::to_string(t[c]) + " out of range");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw MeshError("face " + std::to_string(f) + " repeats a vertex index");
        }
    }

    // Orientation fix precedes the area floor: a clockwise face is recoverable,
    // a collapsed one is not.
    std::vector<double> areas(faces.size());
    double mean_abs_area = 0.0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        areas[f] = signed_area(vertices[faces[f][0]], vertices[faces[f][1]], vertices[faces[f][2]]);
        mean_abs_area += std::abs(areas[f]);
    }
    mean_abs_area /= static_cast<double>(faces.size());
    const double area_floor = kAreaEpsRel * mean_abs_area;

    int flipped = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (std::abs(areas[f]) < area_floor || areas[f] == 0.0) {
            throw MeshError("face " + std::to_string(f) + " is degenerate (area " +
                            std::to_string(areas[f]) + " below floor)");
        }
        if (areas[f] < 0.0) {
            std::swap(faces[f][1], faces[f][2]);
            areas[f] = -areas[f];
            ++flipped;
        }
    }
    if (flipped > 0 && warnings) {
        warnings->push_back("reoriented " + std::to_string(flipped) +
                            " clockwise face(s) to counterclockwise");
    }

    auto table = detail::EdgeTable::build(faces);

    TriangleMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.faces = std::move(faces);
    mesh.face_areas = std::move(areas);
    mesh.total_area = 0.0;
    for (double a : mesh.face_areas) mesh.total_area += a;

    mesh.face_neighbors.assign(mesh.faces.size(), {-1, -1, -1});
    for (const auto& [key, uses] : table.edges) {
        if (uses[1].face < 0) continue;
        mesh.face_neighbors[uses[0].face][uses[0].corner] = uses[1].face;
        mesh.face_neighbors[uses[1].face][uses[1].corner] = uses[0].face;
    }

    mesh.boundary_loops = detail::trace_boundary_loops(mesh.faces, table);
    mesh.vertex_on_boundary.assign(nv, 0);
    for (const auto& loop : mesh.boundary_loops) {
        for (int v : loop) mesh.vertex_on_boundary[v] = 1;
    }
    return mesh;
}

/**
 * Recomputes the boundary loops of a valid mesh from scratch. Each loop
 * traverses its boundary edges once with the domain on the left: the outer
 * loop runs counterclockwise, inner loops clockwise.
 */
inline std::vector<std::vector<int>> boundary_loops(const TriangleMesh& mesh)
{
    auto table = detail::EdgeTable::build(mesh.faces);
    return detail::trace_boundary_loops(mesh.faces, table);
}

/**
 * Per-face Wirtinger derivatives fz = (fx - i fy)/2, fzbar = (fx + i fy)/2
 * of the affine interpolant of `map` on each face. Exact for globally
 * affine maps.
 */
inline FaceDerivatives wirtinger_derivatives(const TriangleMesh& mesh,
                                             const PiecewiseLinearMap& map)
{
    if (map.values.size() != mesh.vertices.size()) {
        throw MeshError("map has " + std::to_string(map.values.size()) + " values for " +
                        std::to_string(mesh.vertices.size()) + " vertices");
    }
    FaceDerivatives d;
    d.fz.resize(mesh.faces.size());
    d.fzbar.resize(mesh.faces.size());
    const Complex I(0.0, 1.0);
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        const double inv4a = 1.0 / (4.0 * mesh.face_areas[f]);
        Complex sz = 0.0, szbar = 0.0;
        for (int c = 0; c < 3; ++c) {
            // Edge opposite corner c, in face orientation.
            const Complex e = mesh.vertices[t[(c + 2) % 3]] - mesh.vertices[t[(c + 1) % 3]];
            const Complex w = map.values[t[c]];
            sz += std::conj(e) * w;
            szbar += e * w;
        }
        d.fz[f] = -I * inv4a * sz;
        d.fzbar[f] = I * inv4a * szbar;
    }
    return d;
}

/** Per-face Jacobian determinants |fz|^2 - |fzbar|^2 of the interpolant. */
inline std::vector<double> face_jacobians(const TriangleMesh& mesh, const PiecewiseLinearMap& map)
{
    auto d = wirtinger_derivatives(mesh, map);
    std::vector<double> j(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        j[f] = std::norm(d.fz[f]) - std::norm(d.fzbar[f]);
    }
    return j;
}

/**
 * Validates constraint indices against the mesh and fills target_area.
 * Without an explicit area, the target area is the summed shoelace area of
 * the boundary loops with constraint targets substituted for positions,
 * which requires every boundary vertex to be constrained.
 */
inline ConstraintSet make_constraints(const TriangleMesh& mesh,
                                      std::vector<std::pair<int, Complex>> boundary,
                                      std::vector<std::pair<int, Complex>> landmarks,
                                      std::optional<double> target_area = std::nullopt)
{
    const int nv = mesh.vertex_count();
    std::vector<char> seen(nv, 0);
    auto check = [&](int v, bool expect_boundary) {
        if (v < 0 || v >= nv) {
            throw ConstraintError("constraint vertex " + std::to_string(v) + " out of range");
        }
        if (seen[v]) {
            throw ConstraintError("vertex " + std::to_string(v) + " constrained more than once");
        }
        seen[v] = 1;
        const bool on_boundary = mesh.vertex_on_boundary[v] != 0;
        if (expect_boundary && !on_boundary) {
            throw ConstraintError("boundary constraint names interior vertex " + std::to_string(v));
        }
        if (!expect_boundary && on_boundary) {
            throw ConstraintError("landmark constraint names boundary vertex " + std::to_string(v));
        }
    };
    for (const auto& [v, w] : boundary) check(v, true);
    for (const auto& [v, w] : landmarks) check(v, false);

    ConstraintSet cs;
    cs.boundary = std::move(boundary);
    cs.landmarks = std::move(landmarks);

    if (target_area) {
        cs.target_area = *target_area;
    } else {
        std::vector<Complex> target_of(nv);
        std::vector<char> has_target(nv, 0);
        for (const auto& [v, w] : cs.boundary) {
            target_of[v] = w;
            has_target[v] = 1;
        }
        double area = 0.0;
        for (const auto& loop : mesh.boundary_loops) {
            std::vector<Complex> mapped;
            mapped.reserve(loop.size());
            for (int v : loop) {
                if (!has_target[v]) {
                    throw ConstraintError(
                        "target area requires the full boundary to be constrained "
                        "(or an explicit target_area); boundary vertex " +
                        std::to_string(v) + " has no target");
                }
                mapped.push_back(target_of[v]);
            }
            area += polygon_area(mapped);
        }
        cs.target_area = area;
    }
    if (!(cs.target_area > 0.0)) {
        throw ConstraintError("target area must be positive, got " +
                              std::to_string(cs.target_area));
    }
    if (cs.size() == 0) {
        throw ConstraintError("constraint set is empty");
    }
    return cs;
}

/** True when every boundary vertex of the mesh carries a boundary constraint. */
inline bool covers_full_boundary(const TriangleMesh& mesh, const ConstraintSet& cs)
{
    std::vector<char> has(mesh.vertex_count(), 0);
    for (const auto& [v, w] : cs.boundary) has[v] = 1;
    for (const auto& loop : mesh.boundary_loops) {
        for (int v : loop) {
            if (!has[v]) return false;
        }
    }
    return true;
}

}  // namespace tqc
