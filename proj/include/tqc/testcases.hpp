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
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tqc/mesh.hpp"

namespace tqc {

// Twist angles of the bundled landmark and annulus cases, in radians.
inline constexpr double kLandmarkTwist = 0.25;
inline constexpr double kAnnulusTwist = 0.5;
inline constexpr double kAnnulusInnerRadius = 0.4;

namespace detail {

// Stitches two concentric vertex rings into a CCW triangle band by merging
// on angle. Ring k has count[k] vertices starting at start[k], vertex j at
// angle 2*pi*j/count[k]. Mirrored bands run the merge on negated angles so
// the diagonals lean the other way; alternating the handedness per band
// cancels the azimuthal torque a one-sided stitch feeds into dual-graph
// smoothing.
inline void stitch_ring_band(std::vector<std::array<int, 3>>& faces, int start_in, int n_in,
                             int start_out, int n_out, bool mirrored)
{
    int a = 0, b = 0;
    auto in_v = [&](int j) {
        int k = j % n_in;
        if (mirrored) k = (n_in - k) % n_in;
        return start_in + k;
    };
    auto out_v = [&](int j) {
        int k = j % n_out;
        if (mirrored) k = (n_out - k) % n_out;
        return start_out + k;
    };
    while (a < n_in || b < n_out) {
        bool advance_outer;
        if (a == n_in) {
            advance_outer = true;
        } else if (b == n_out) {
            advance_outer = false;
        } else {
            advance_outer = (b + 1) * n_in <= (a + 1) * n_out;  // next outer angle <= next inner
        }
        if (advance_outer) {
            if (mirrored) {
                faces.push_back({out_v(b + 1), out_v(b), in_v(a)});
            } else {
                faces.push_back({out_v(b), out_v(b + 1), in_v(a)});
            }
            ++b;
        } else {
            if (mirrored) {
                faces.push_back({in_v(a + 1), in_v(a), out_v(b)});
            } else {
                faces.push_back({in_v(a), out_v(b), in_v(a + 1)});
            }
            ++a;
        }
    }
}

}  // namespace detail

/**
 * Unit disk triangulated in hexagonal rings: ring i carries 6*i vertices at
 * radius i/rings. 6*rings^2 faces, near-equilateral throughout.
 */
inline TriangleMesh disk_mesh(int rings)
{
    if (rings < 1) throw MeshError("disk_mesh needs at least one ring");
    std::vector<Complex> vertices;
    vertices.emplace_back(0.0, 0.0);
    std::vector<int> ring_start(rings + 1, 0);
    for (int i = 1; i <= rings; ++i) {
        ring_start[i] = static_cast<int>(vertices.size());
        const double r = static_cast<double>(i) / rings;
        const int n = 6 * i;
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n;
            vertices.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<std::size_t>(6) * rings * rings);
    for (int j = 0; j < 6; ++j) {
        faces.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % 6});
    }
    for (int i = 2; i <= rings; ++i) {
        detail::stitch_ring_band(faces, ring_start[i - 1], 6 * (i - 1), ring_start[i], 6 * i,
                                 i % 2 == 0);
    }
    return build_mesh(std::move(vertices), std::move(faces));
}

/** Smallest hexagonal disk mesh with at least `min_faces` faces. */
inline TriangleMesh disk_mesh_with_faces(int min_faces)
{
    int rings = static_cast<int>(std::ceil(std::sqrt(std::max(1, min_faces) / 6.0)));
    return disk_mesh(std::max(1, rings));
}

/** Annulus with `rings` radial bands of `segments` vertices each. */
inline TriangleMesh annulus_mesh(double inner_radius, int rings, int segments)
{
    if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
        throw MeshError("annulus inner radius must lie in (0,1)");
    }
    if (rings < 1 || segments < 3) throw MeshError("annulus needs rings >= 1, segments >= 3");
    if (segments % 2 != 0) ++segments;  // herringbone parity must close around the ring
    std::vector<Complex> vertices;
    for (int i = 0; i <= rings; ++i) {
        const double r = inner_radius + (1.0 - inner_radius) * i / rings;
        for (int j = 0; j < segments; ++j) {
            const double th = 2.0 * std::numbers::pi * j / segments;
            vertices.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<std::size_t>(2) * rings * segments);
    for (int i = 0; i < rings; ++i) {
        const int in0 = i * segments;
        const int out0 = (i + 1) * segments;
        for (int j = 0; j < segments; ++j) {
            const int jn = (j + 1) % segments;
            // Alternating quad diagonals keep the band reflection-symmetric.
            if ((i + j) % 2 == 0) {
                faces.push_back({in0 + j, out0 + j, out0 + jn});
                faces.push_back({in0 + j, out0 + jn, in0 + jn});
            } else {
                faces.push_back({in0 + j, out0 + j, in0 + jn});
                faces.push_back({out0 + j, out0 + jn, in0 + jn});
            }
        }
    }
    return build_mesh(std::move(vertices), std::move(faces));
}

/** Annulus mesh sized to roughly `min_faces` faces with near-square bands. */
inline TriangleMesh annulus_mesh_with_faces(int min_faces, double inner_radius = kAnnulusInnerRadius)
{
    const double f = std::max(24, min_faces);
    const double mean_r = 0.5 * (1.0 + inner_radius);
    int segments = static_cast<int>(
        std::ceil(std::sqrt(f * std::numbers::pi * mean_r / (1.0 - inner_radius))));
    segments = std::max(segments, 8);
    int rings = std::max(1, static_cast<int>(std::ceil(f / (2.0 * segments))));
    return annulus_mesh(inner_radius, rings, segments);
}

/**
 * Disk mesh with interior vertices displaced by a deterministic jitter of
 * `amplitude` ring spacings. Stays a valid CCW mesh for amplitude <= 0.25.
 */
inline TriangleMesh jittered_disk_mesh(int rings, double amplitude, unsigned seed)
{
    TriangleMesh base = disk_mesh(rings);
    std::mt19937 rng(seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng()) / 4294967296.0 * 2.0 - 1.0;  // [-1, 1)
    };
    const double scale = amplitude / rings;
    std::vector<Complex> vertices = base.vertices;
    for (int v = 0; v < base.vertex_count(); ++v) {
        if (base.vertex_on_boundary[v]) continue;
        vertices[v] += Complex(uniform() * scale, uniform() * scale);
    }
    return build_mesh(std::move(vertices), base.faces);
}

/** Mesh + constraints for one bundled test case. */
struct TestCase {
    std::string name;
    TriangleMesh mesh;
    ConstraintSet constraints;
};

/**
 * Deterministic bundled cases, keyed by name:
 *   identity  - disk, identity boundary correspondence
 *   affine    - disk, boundary w = z + 0.3 conj(z)
 *   landmarks - disk, identity boundary, 6 interior landmarks twisted about
 *               the center by kLandmarkTwist
 *   annulus   - annulus, identity outer boundary, inner boundary rotated by
 *               kAnnulusTwist
 * `size` is the approximate face count.
 */
inline TestCase make_testcase(const std::string& name, int size)
{
    TestCase tc;
    tc.name = name;
    if (name == "identity" || name == "affine" || name == "landmarks") {
        tc.mesh = disk_mesh_with_faces(size);
        std::vector<std::pair<int, Complex>> boundary;
        for (const auto& loop : tc.mesh.boundary_loops) {
            for (int v : loop) {
                const Complex z = tc.mesh.vertices[v];
                boundary.emplace_back(v, name == "affine" ? z + 0.3 * std::conj(z) : z);
            }
        }
        std::vector<std::pair<int, Complex>> landmarks;
        if (name == "landmarks") {
            const int rings = static_cast<int>(std::ceil(std::sqrt(size / 6.0)));
            const int ring = std::max(1, (rings + 1) / 2);
            const int ring_start = 1 + 3 * ring * (ring - 1);
            const Complex rot = std::polar(1.0, kLandmarkTwist);
            for (int k = 0; k < 6; ++k) {
                const int v = ring_start + k * ring;  // angle k * 60 degrees
                landmarks.emplace_back(v, rot * tc.mesh.vertices[v]);
            }
        }
        tc.constraints = make_constraints(tc.mesh, std::move(boundary), std::move(landmarks));
    } else if (name == "annulus") {
        tc.mesh = annulus_mesh_with_faces(size);
        const Complex rot = std::polar(1.0, kAnnulusTwist);
        std::vector<std::pair<int, Complex>> boundary;
        for (const auto& loop : tc.mesh.boundary_loops) {
            // Inner loop vertices sit strictly inside the unit circle.
            const bool inner = std::abs(tc.mesh.vertices[loop.front()]) < 0.999;
            for (int v : loop) {
                const Complex z = tc.mesh.vertices[v];
                boundary.emplace_back(v, inner ? rot * z : z);
            }
        }
        tc.constraints = make_constraints(tc.mesh, std::move(boundary), {});
    } else {
        throw IoError("unknown test case name: " + name +
                      " (expected affine|identity|landmarks|annulus)");
    }
    return tc;
}

}  // namespace tqc
