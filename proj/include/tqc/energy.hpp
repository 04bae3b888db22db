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

#include "tqc/beltrami.hpp"
#include "tqc/lbs.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

/** Relative floor absorbing cancellation near convergence. */
inline constexpr double kGapEpsRel = 1e-9;

/** Moduli of a constant-modulus field may scatter by at most this much. */
inline constexpr double kConstantModulusTol = 1e-9;

/**
 * Energy bookkeeping for one iterate. `harmonic_energy` is the harmonic
 * energy of the map measured in the auxiliary metric of `mu`; it exceeds
 * the target area by exactly `energy_gap`, the quantity the iteration
 * drives to zero.
 */
struct EnergyReport {
    double harmonic_energy = 0.0;
    double energy_gap = 0.0;
    double target_area = 0.0;
    double k_modulus = 0.0;

    double gap_eps() const { return kGapEpsRel * harmonic_energy; }
};

/** Flat-metric harmonic (Dirichlet-type) energy sum_T area_T (|fz|^2 + |fzbar|^2). */
inline double harmonic_energy(const TriangleMesh& mesh, const PiecewiseLinearMap& map)
{
    auto d = wirtinger_derivatives(mesh, map);
    double e = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        e += mesh.face_areas[f] * (std::norm(d.fz[f]) + std::norm(d.fzbar[f]));
    }
    return e;
}

/**
 * Teichmueller energy gap of a map against a constant-modulus field:
 *
 *   gap = 2 / (1 - k^2) * sum_T area_T |fzbar_T - mu_T fz_T|^2.
 *
 * The auxiliary-metric harmonic energy of the map is gap + target_area, so
 * the gap is nonnegative and vanishes exactly at auxiliary-conformal maps.
 * `mu` must have constant modulus k < 1 (project first).
 */
inline EnergyReport energy_gap(const TriangleMesh& mesh, const PiecewiseLinearMap& map,
                               const BeltramiField& mu, double target_area)
{
    detail::require_field_size(mesh, mu, "energy_gap");
    if (!(target_area > 0.0)) throw SolverError("energy_gap: target area must be positive");
    auto stats = dilation_stats(mu, mesh);
    if (stats.modulus_std > kConstantModulusTol) {
        throw SolverError("energy_gap: mu does not have constant modulus (std = " +
                          std::to_string(stats.modulus_std) + "); project first");
    }
    const double k = stats.mean_modulus;
    if (!(k < 1.0)) throw SolverError("energy_gap: k must be below 1, got " + std::to_string(k));

    EnergyReport r;
    r.k_modulus = k;
    r.target_area = target_area;
    r.energy_gap = 2.0 / (1.0 - k * k) * residual_energy(mesh, map, mu);
    r.harmonic_energy = r.energy_gap + target_area;
    return r;
}

/** Discrete lower bound: the auxiliary harmonic energy dominates the target area. */
inline bool lower_bound_check(const EnergyReport& report)
{
    return report.harmonic_energy >= report.target_area - report.gap_eps();
}

}  // namespace tqc
