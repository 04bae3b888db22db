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

#include <fstream>
#include <json.hpp>

#include "support.hpp"
#include "tqc/diagnostics.hpp"
#include "tqc/qc_iteration.hpp"
#include "tqc/testcases.hpp"

using namespace tqc;
using tqctest::TempDir;
using tqctest::affine_map;
using tqctest::close;
using tqctest::identity_map;

TEST_CASE("modulus histogram binning")
{
    SECTION("constant field lands in one bin")
    {
        auto mesh = disk_mesh(4);
        auto h = modulus_histogram(mesh, constant_field(mesh, 0.33), 50);
        REQUIRE(close(h.mass[16], mesh.total_area, 1e-12 * mesh.total_area));  // [0.32, 0.34)
        for (int i = 0; i < 50; ++i) {
            if (i != 16) REQUIRE(h.mass[i] == 0.0);
        }
        auto h0 = modulus_histogram(mesh, zero_field(mesh), 50);
        REQUIRE(close(h0.mass[0], mesh.total_area, 1e-12 * mesh.total_area));
    }
    SECTION("two equal-area faces split across bins")
    {
        auto mesh = tqctest::two_face_mesh();
        BeltramiField f;
        f.values = {Complex(0.2, 0.0), Complex(0.4, 0.0)};
        auto h = modulus_histogram(mesh, f, 10);
        REQUIRE(close(h.mass[2], 0.5, 1e-15));
        REQUIRE(close(h.mass[4], 0.5, 1e-15));
    }
    SECTION("mass is conserved on random fields")
    {
        auto mesh = jittered_disk_mesh(4, 0.2, 5);
        std::mt19937 rng(61);
        BeltramiField f;
        for (int t = 0; t < mesh.face_count(); ++t) {
            f.values.push_back(tqctest::random_complex(rng, 0.7));
        }
        auto h = modulus_histogram(mesh, f, 17);
        double total = 0.0;
        for (double m : h.mass) total += m;
        REQUIRE(close(total, mesh.total_area, 1e-9 * mesh.total_area));
    }
}

TEST_CASE("argument laplacian")
{
    SECTION("constant fields give identically zero values")
    {
        auto mesh = disk_mesh(5);
        std::vector<int> faces;
        std::vector<double> values;
        double median = -1.0;
        int excluded = 0;
        arg_laplacian_stats(mesh, constant_field(mesh, Complex(0.3, -0.25)), faces, values,
                            median, excluded);
        REQUIRE(median == 0.0);
        for (double v : values) REQUIRE(v == 0.0);
        REQUIRE(excluded == 0);
    }
    SECTION("constant-argument fields with varying moduli vanish to arg() roundoff")
    {
        auto mesh = disk_mesh(5);
        std::mt19937 rng(83);
        BeltramiField f;
        for (int t = 0; t < mesh.face_count(); ++t) {
            const double m = 0.1 + 0.5 * static_cast<double>(rng()) / 4294967296.0;
            f.values.push_back(std::polar(m, 0.7));
        }
        std::vector<int> faces;
        std::vector<double> values;
        double median = -1.0;
        int excluded = 0;
        arg_laplacian_stats(mesh, f, faces, values, median, excluded);
        REQUIRE(median <= 1e-13);
        for (double v : values) REQUIRE(std::abs(v) <= 1e-13);
        REQUIRE(excluded == 0);
    }
    SECTION("converged affine field gives zero median")
    {
        auto tc = make_testcase("affine", 400);
        auto res = run(tc.mesh, tc.constraints, SolverParams{});
        auto rep = build_diagnostics(tc.mesh, res.map, res.mu);
        REQUIRE(rep.arg_laplacian_median_abs <= 1e-12);
    }
    SECTION("differences unwrap across the branch cut")
    {
        // Arguments hug +/- pi; the principal-value difference is small even
        // though the raw difference is ~2 pi.
        auto mesh = tqctest::two_face_mesh();
        BeltramiField f;
        f.values = {std::polar(0.5, std::numbers::pi - 0.05),
                    std::polar(0.5, -std::numbers::pi + 0.05)};
        std::vector<int> faces;
        std::vector<double> values;
        double median = -1.0;
        int excluded = 0;
        arg_laplacian_stats(mesh, f, faces, values, median, excluded);
        REQUIRE(values.size() == 2);
        REQUIRE(close(std::abs(values[0]), 0.1, 1e-12));
        REQUIRE(close(std::abs(values[1]), 0.1, 1e-12));
    }
    SECTION("faces touching a vanishing face are excluded and counted")
    {
        auto mesh = disk_mesh(3);
        BeltramiField f = constant_field(mesh, Complex(0.4, 0.1));
        f.values[0] = 0.0;
        std::vector<int> faces;
        std::vector<double> values;
        double median = -1.0;
        int excluded = 0;
        arg_laplacian_stats(mesh, f, faces, values, median, excluded);
        int expected_excluded = 1;  // the zero face itself
        for (int n : mesh.face_neighbors[0]) {
            if (n >= 0) ++expected_excluded;
        }
        REQUIRE(excluded == expected_excluded);
        REQUIRE(static_cast<int>(values.size()) + excluded == mesh.face_count());
    }
}

TEST_CASE("hopf residual closed forms")
{
    auto mesh = jittered_disk_mesh(4, 0.2, 19);
    const double area = mesh.total_area;
    SECTION("identity map with zero field vanishes")
    {
        REQUIRE(hopf_residual(mesh, identity_map(mesh), zero_field(mesh)) <= 1e-15);
    }
    SECTION("identity map against constant 0.5 integrates to two thirds of the area")
    {
        const double h = hopf_residual(mesh, identity_map(mesh), constant_field(mesh, 0.5));
        REQUIRE(close(h, 2.0 / 3.0 * area, 1e-11 * area));
    }
    SECTION("matched affine state vanishes")
    {
        auto f = affine_map(mesh, 1.0, 0.3);
        REQUIRE(hopf_residual(mesh, f, constant_field(mesh, 0.3)) <= 1e-15);
    }
    SECTION("inadmissible modulus is rejected")
    {
        REQUIRE_THROWS_AS(
            hopf_residual(mesh, identity_map(mesh), constant_field(mesh, Complex(1.0, 0.0))),
            SolverError);
    }
}

TEST_CASE("report emission round-trips")
{
    auto tc = make_testcase("affine", 300);
    auto res = run(tc.mesh, tc.constraints, SolverParams{});
    auto rep = build_diagnostics(tc.mesh, res.map, res.mu, 25);
    REQUIRE(rep.fold_count == 0);

    TempDir tmp;
    write_report(rep, tmp.path("diag.json"));

    std::ifstream in(tmp.path("diag.json"));
    nlohmann::json j;
    in >> j;
    REQUIRE(j["fold_count"].get<int>() == rep.fold_count);
    REQUIRE(j["min_jacobian"].get<double>() == rep.min_jacobian);
    REQUIRE(j["hopf_residual_norm"].get<double>() == rep.hopf_residual_norm);
    REQUIRE(j["arg_laplacian_median_abs"].get<double>() == rep.arg_laplacian_median_abs);
    REQUIRE(j["bins"].get<int>() == 25);

    auto hist = read_histogram_csv(tmp.path("diag.hist.csv"));
    REQUIRE(hist.mass.size() == 25);
    REQUIRE(hist.mass == rep.modulus_histogram.mass);
    REQUIRE(hist.edges == rep.modulus_histogram.edges);

    // arglap sidecar has one row per evaluated face.
    std::ifstream arglap(tmp.path("diag.arglap.csv"));
    std::string line;
    std::size_t rows = 0;
    bool header = true;
    while (std::getline(arglap, line)) {
        if (header) {
            REQUIRE(line == "face,value");
            header = false;
            continue;
        }
        if (!trim(line).empty()) ++rows;
    }
    REQUIRE(rows == rep.arg_faces.size());
}
