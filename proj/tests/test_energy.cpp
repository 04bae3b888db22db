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
#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "tqc/energy.hpp"
#include "tqc/testcases.hpp"

using namespace tqc;
using tqctest::affine_map;
using tqctest::close;
using tqctest::identity_map;

TEST_CASE("harmonic energy closed forms")
{
    auto mesh = jittered_disk_mesh(5, 0.2, 23);
    const double area = mesh.total_area;
    REQUIRE(close(harmonic_energy(mesh, identity_map(mesh)), area, 1e-11 * area));

    auto fk = affine_map(mesh, 1.0, 0.5);
    REQUIRE(close(harmonic_energy(mesh, fk), 1.25 * area, 1e-11 * area));

    auto constant = affine_map(mesh, 0.0, 0.0, Complex(3.0, -4.0));
    REQUIRE(harmonic_energy(mesh, constant) <= 1e-18);
}

TEST_CASE("harmonic energy dominates the unsigned mapped area per face")
{
    auto mesh = jittered_disk_mesh(4, 0.2, 29);
    std::mt19937 rng(71);
    auto f = tqctest::random_map(mesh, rng);
    auto d = wirtinger_derivatives(mesh, f);
    for (int t = 0; t < mesh.face_count(); ++t) {
        const double density = std::norm(d.fz[t]) + std::norm(d.fzbar[t]);
        const double jac = std::norm(d.fz[t]) - std::norm(d.fzbar[t]);
        REQUIRE(density >= std::abs(jac) - 1e-14 * density);
    }
}

TEST_CASE("energy gap closed forms")
{
    auto mesh = jittered_disk_mesh(4, 0.2, 37);
    const double area = mesh.total_area;

    SECTION("matched affine pair has zero gap")
    {
        auto f = affine_map(mesh, 1.0, 0.3);
        auto r = energy_gap(mesh, f, constant_field(mesh, 0.3), 0.91 * area);
        REQUIRE(std::abs(r.energy_gap) <= 1e-15);
        REQUIRE(close(r.k_modulus, 0.3, 1e-12));
        REQUIRE(lower_bound_check(r));
    }
    SECTION("identity against mu = 0.5 gives two thirds of the area")
    {
        auto r = energy_gap(mesh, identity_map(mesh), constant_field(mesh, 0.5), area);
        REQUIRE(close(r.energy_gap, 2.0 / 3.0 * area, 1e-11 * area));
        REQUIRE(close(r.harmonic_energy, r.energy_gap + r.target_area, 1e-15 * area));
    }
    SECTION("non-constant modulus is rejected")
    {
        BeltramiField mixed = zero_field(mesh);
        mixed.values[0] = Complex(0.5, 0.0);
        REQUIRE_THROWS_AS(energy_gap(mesh, identity_map(mesh), mixed, area), SolverError);
    }
    SECTION("k at or above one is rejected")
    {
        // Bypass the admissibility cap deliberately.
        REQUIRE_THROWS_AS(
            energy_gap(mesh, identity_map(mesh), constant_field(mesh, Complex(1.0, 0.0)), area),
            SolverError);
    }
}

TEST_CASE("energy gap is invariant under rigid translation")
{
    auto mesh = jittered_disk_mesh(4, 0.2, 41);
    std::mt19937 rng(5);
    auto f = tqctest::random_map(mesh, rng);
    auto mu = constant_field(mesh, Complex(0.2, 0.3));
    auto g = f;
    for (auto& v : g.values) v += Complex(10.0, -7.0);
    auto rf = energy_gap(mesh, f, mu, 1.0);
    auto rg = energy_gap(mesh, g, mu, 1.0);
    REQUIRE(close(rf.energy_gap, rg.energy_gap, 1e-10 * std::max(1.0, rf.energy_gap)));
}

TEST_CASE("lower bound check flags corrupted reports")
{
    EnergyReport good;
    good.target_area = 2.0;
    good.energy_gap = 0.0;
    good.harmonic_energy = 2.0;
    REQUIRE(lower_bound_check(good));

    EnergyReport bad = good;
    bad.energy_gap = -1.0;
    bad.harmonic_energy = 1.0;
    REQUIRE_FALSE(lower_bound_check(bad));
}
