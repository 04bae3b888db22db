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

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <ostream>
#include <string>
#include <vector>

#include "tqc/beltrami.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

/** Relative residual the linear solve must reach. */
inline constexpr double kSolverTol = 1e-10;

/**
 * Normal equations of the least-squares Beltrami energy
 *
 *   E(f) = sum_T area_T |fzbar_T - mu_T fz_T|^2
 *
 * over the free vertices, with Dirichlet values eliminated into the right
 * hand side. E is a Hermitian form in the complex vertex positions, so the
 * system stays n x n complex rather than 2n x 2n real. It is positive
 * definite whenever |mu| < 1 everywhere and at least one vertex is pinned:
 * a minimizer with zero energy and zero boundary data has nonnegative
 * Jacobian summing to the (zero) image area, hence vanishes identically.
 */
struct LbsSystem {
    Eigen::SparseMatrix<Complex> matrix;            // Hermitian, free x free
    Eigen::VectorXcd rhs;                           // free slots
    std::vector<int> free_index_map;                // vertex -> slot, -1 if constrained
    std::vector<std::pair<int, Complex>> constrained;
    int free_count = 0;
};

/**
 * Assembles the eliminated normal equations for `mu` and the Dirichlet data
 * in `constraints`. Throws for empty constraints or inadmissible mu.
 */
inline LbsSystem assemble(const TriangleMesh& mesh, const BeltramiField& mu,
                          const ConstraintSet& constraints)
{
    detail::require_field_size(mesh, mu, "assemble");
    if (constraints.size() == 0) throw SolverError("assemble: empty constraint set");
    for (int f = 0; f < mu.size(); ++f) {
        const double m = std::abs(mu.values[f]);
        if (!(m < 1.0) || !std::isfinite(m)) {
            throw SolverError("assemble: inadmissible mu (|mu| = " + std::to_string(m) +
                              " on face " + std::to_string(f) + ")");
        }
    }

    const int nv = mesh.vertex_count();
    LbsSystem sys;
    sys.free_index_map.assign(nv, 0);
    std::vector<Complex> fixed_value(nv);
    auto pin = [&](int v, Complex w) {
        if (v < 0 || v >= nv) {
            throw SolverError("assemble: constraint vertex " + std::to_string(v) +
                              " out of range");
        }
        if (sys.free_index_map[v] == -1) {
            throw SolverError("assemble: vertex " + std::to_string(v) +
                              " constrained more than once");
        }
        sys.free_index_map[v] = -1;
        fixed_value[v] = w;
        sys.constrained.emplace_back(v, w);
    };
    for (const auto& [v, w] : constraints.boundary) pin(v, w);
    for (const auto& [v, w] : constraints.landmarks) pin(v, w);
    int slot = 0;
    for (int v = 0; v < nv; ++v) {
        if (sys.free_index_map[v] == 0) sys.free_index_map[v] = slot++;
    }
    sys.free_count = slot;
    sys.rhs = Eigen::VectorXcd::Zero(slot);

    // Per face the defect is the complex-linear form sum_j C_j w_j with
    // C_j = (i e_j - mu_T (-i conj(e_j))) / (4 A_T); the energy contributes
    // A_T conj(C_k) C_j to entry (k, j).
    const Complex I(0.0, 1.0);
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(mesh.faces.size() * 9);
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& t = mesh.faces[f];
        const double area = mesh.face_areas[f];
        const double inv4a = 1.0 / (4.0 * area);
        Complex coeff[3];
        for (int c = 0; c < 3; ++c) {
            const Complex e = mesh.vertices[t[(c + 2) % 3]] - mesh.vertices[t[(c + 1) % 3]];
            const Complex d = -I * std::conj(e) * inv4a;  // fz coefficient
            const Complex g = I * e * inv4a;              // fzbar coefficient
            coeff[c] = g - mu.values[f] * d;
        }
        for (int k = 0; k < 3; ++k) {
            const int vk = t[k];
            const int rk = sys.free_index_map[vk];
            if (rk < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int vj = t[j];
                const Complex a = area * std::conj(coeff[k]) * coeff[j];
                const int cj = sys.free_index_map[vj];
                if (cj >= 0) {
                    triplets.emplace_back(rk, cj, a);
                } else {
                    sys.rhs[rk] -= a * fixed_value[vj];
                }
            }
        }
    }
    sys.matrix.resize(slot, slot);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return sys;
}

/**
 * Solves for the unique constrained minimizer. Direct Hermitian LDLT
 * factorization first, sparse LU as fallback; throws when neither reaches
 * kSolverTol relative residual.
 */
inline PiecewiseLinearMap solve(const LbsSystem& sys)
{
    PiecewiseLinearMap map;
    map.values.assign(sys.free_index_map.size(), Complex(0.0, 0.0));
    for (const auto& [v, w] : sys.constrained) map.values[v] = w;
    if (sys.free_count == 0) return map;

    const double rhs_norm = sys.rhs.norm();
    Eigen::VectorXcd x;
    double rel = std::numeric_limits<double>::infinity();

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> ldlt(sys.matrix);
    if (ldlt.info() == Eigen::Success) {
        x = ldlt.solve(sys.rhs);
        rel = rhs_norm > 0.0 ? (sys.matrix * x - sys.rhs).norm() / rhs_norm : 0.0;
    }
    if (!(rel <= kSolverTol)) {
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(sys.matrix);
        if (lu.info() != Eigen::Success) {
            throw SolverError("solve: factorization failed (near-degenerate mesh or |mu| -> 1)");
        }
        x = lu.solve(sys.rhs);
        rel = rhs_norm > 0.0 ? (sys.matrix * x - sys.rhs).norm() / rhs_norm : 0.0;
        if (!(rel <= kSolverTol)) {
            throw SolverError("solve: relative residual " + std::to_string(rel) +
                              " exceeds tolerance");
        }
    }
    for (std::size_t v = 0; v < sys.free_index_map.size(); ++v) {
        if (sys.free_index_map[v] >= 0) map.values[v] = x[sys.free_index_map[v]];
    }
    return map;
}

/** E(f) = sum_T area_T |fzbar_T - mu_T fz_T|^2, evaluated directly. */
inline double residual_energy(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                              const BeltramiField& mu)
{
    detail::require_field_size(mesh, mu, "residual_energy");
    auto d = wirtinger_derivatives(mesh, map);
    double e = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        e += mesh.face_areas[f] * std::norm(d.fzbar[f] - mu.values[f] * d.fz[f]);
    }
    return e;
}

/** Debug dump of the reduced matrix in `row col re im` coordinate format. */
inline void dump_coo(const LbsSystem& sys, std::ostream& out)
{
    for (int k = 0; k < sys.matrix.outerSize(); ++k) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(sys.matrix, k); it; ++it) {
            out << it.row() << " " << it.col() << " " << format_double(it.value().real()) << " "
                << format_double(it.value().imag()) << "\n";
        }
    }
}

}  // namespace tqc
