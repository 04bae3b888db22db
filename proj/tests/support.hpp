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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>

#include "tqc/mesh.hpp"

namespace tqctest {

inline bool close(tqc::Complex a, tqc::Complex b, double tol)
{
    return std::abs(a - b) <= tol;
}

inline bool close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol;
}

/** Unique scratch directory, removed on destruction. */
class TempDir {
public:
    TempDir()
    {
        auto base = std::filesystem::temp_directory_path();
        static std::atomic<int> counter{0};
        dir_ = base / ("tqc_test_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

inline void write_text(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    out << content;
}

/** Two CCW triangles sharing the diagonal of the unit square, equal areas. */
inline tqc::TriangleMesh two_face_mesh()
{
    return tqc::build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 1, 2}}, {{0, 2, 3}}});
}

/** Single CCW triangle (0,0), (1,0), (0,1). */
inline tqc::TriangleMesh one_face_mesh()
{
    return tqc::build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}});
}

/** Applies z -> a*z + b*conj(z) + c at every vertex. */
inline tqc::PiecewiseLinearMap affine_map(const tqc::TriangleMesh& mesh, tqc::Complex a,
                                          tqc::Complex b, tqc::Complex c = 0.0)
{
    tqc::PiecewiseLinearMap m;
    m.values.reserve(mesh.vertices.size());
    for (const auto& z : mesh.vertices) m.values.push_back(a * z + b * std::conj(z) + c);
    return m;
}

inline tqc::PiecewiseLinearMap identity_map(const tqc::TriangleMesh& mesh)
{
    return affine_map(mesh, 1.0, 0.0);
}

/** Deterministic complex in the square [-s, s]^2. */
inline tqc::Complex random_complex(std::mt19937& rng, double s = 1.0)
{
    auto u = [&rng]() { return static_cast<double>(rng()) / 4294967296.0 * 2.0 - 1.0; };
    return {u() * s, u() * s};
}

inline tqc::PiecewiseLinearMap random_map(const tqc::TriangleMesh& mesh, std::mt19937& rng,
                                          double s = 1.0)
{
    tqc::PiecewiseLinearMap m;
    m.values.reserve(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        m.values.push_back(random_complex(rng, s));
    }
    return m;
}

}  // namespace tqctest
