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

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tqc/format.hpp"
#include "tqc/mesh.hpp"

namespace tqc {

namespace detail {

inline std::string lowercase_ext(const std::string& path)
{
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

// Next content line: comments (#) and blank lines skipped.
inline bool next_line(std::istream& in, std::string& line)
{
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        line = std::string(t);
        return true;
    }
    return false;
}

inline std::vector<std::string> tokens(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline TriangleMesh load_off(std::istream& in, const std::string& path,
                             std::vector<std::string>* warnings)
{
    std::string line;
    if (!next_line(in, line)) throw IoError(path + ": empty OFF file");
    auto toks = tokens(line);
    std::size_t nv = 0, nf = 0;
    if (toks[0] == "OFF" || toks[0] == "off") {
        if (toks.size() >= 3) {
            nv = static_cast<std::size_t>(parse_long(toks[1]));
            nf = static_cast<std::size_t>(parse_long(toks[2]));
        } else {
            if (!next_line(in, line)) throw IoError(path + ": missing OFF count line");
            toks = tokens(line);
            if (toks.size() < 2) throw IoError(path + ": malformed OFF count line");
            nv = static_cast<std::size_t>(parse_long(toks[0]));
            nf = static_cast<std::size_t>(parse_long(toks[1]));
        }
    } else if (toks.size() >= 2) {
        // Headerless variant: counts on the first line.
        nv = static_cast<std::size_t>(parse_long(toks[0]));
        nf = static_cast<std::size_t>(parse_long(toks[1]));
    } else {
        throw IoError(path + ": not an OFF file");
    }
    if (nv == 0 || nf == 0) throw IoError(path + ": empty mesh");

    std::vector<Complex> vertices;
    vertices.reserve(nv);
    bool warned_z = false;
    for (std::size_t i = 0; i < nv; ++i) {
        if (!next_line(in, line)) throw IoError(path + ": unexpected end of vertex list");
        toks = tokens(line);
        if (toks.size() < 2) throw IoError(path + ": vertex line needs at least 2 coordinates");
        double x = parse_double(toks[0]);
        double y = parse_double(toks[1]);
        if (toks.size() >= 3 && !warned_z && parse_double(toks[2]) != 0.0) {
            warned_z = true;
            if (warnings) warnings->push_back(path + ": ignoring nonzero third coordinates");
        }
        vertices.emplace_back(x, y);
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        if (!next_line(in, line)) throw IoError(path + ": unexpected end of face list");
        toks = tokens(line);
        if (toks.empty()) throw IoError(path + ": malformed face line");
        long cnt = parse_long(toks[0]);
        if (cnt != 3) throw IoError(path + ": only triangular faces supported, got " + toks[0]);
        if (toks.size() < 4) throw IoError(path + ": face line too short");
        faces.push_back({static_cast<int>(parse_long(toks[1])),
                         static_cast<int>(parse_long(toks[2])),
                         static_cast<int>(parse_long(toks[3]))});
    }
    return build_mesh(std::move(vertices), std::move(faces), warnings);
}

inline TriangleMesh load_obj(std::istream& in, const std::string& path,
                             std::vector<std::string>* warnings)
{
    std::vector<Complex> vertices;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    bool warned_z = false;
    auto face_index = [&](const std::string& ref) {
        // "v", "v/t", "v/t/n", "v//n" forms; 1-based, negatives relative to end.
        auto slash = ref.find('/');
        long v = parse_long(slash == std::string::npos ? std::string_view(ref)
                                                       : std::string_view(ref).substr(0, slash));
        if (v < 0) v = static_cast<long>(vertices.size()) + v + 1;
        return static_cast<int>(v - 1);
    };
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto toks = tokens(std::string(t));
        if (toks[0] == "v") {
            if (toks.size() < 3) throw IoError(path + ": vertex line needs at least 2 coordinates");
            double x = parse_double(toks[1]);
            double y = parse_double(toks[2]);
            if (toks.size() >= 4 && !warned_z && parse_double(toks[3]) != 0.0) {
                warned_z = true;
                if (warnings) warnings->push_back(path + ": ignoring nonzero third coordinates");
            }
            vertices.emplace_back(x, y);
        } else if (toks[0] == "f") {
            if (toks.size() != 4) {
                throw IoError(path + ": only triangular faces supported");
            }
            faces.push_back({face_index(toks[1]), face_index(toks[2]), face_index(toks[3])});
        }
        // All other OBJ directives (vt, vn, usemtl, ...) are ignored.
    }
    if (vertices.empty() || faces.empty()) throw IoError(path + ": no mesh data found");
    return build_mesh(std::move(vertices), std::move(faces), warnings);
}

}  // namespace detail

/** Loads an OFF or OBJ triangle mesh and validates it via build_mesh(). */
inline TriangleMesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);
    auto ext = detail::lowercase_ext(path);
    if (ext == "obj") return detail::load_obj(in, path, warnings);
    if (ext == "off") return detail::load_off(in, path, warnings);
    // Sniff: OFF keyword or a count line.
    std::string first;
    auto pos = in.tellg();
    if (!detail::next_line(in, first)) throw IoError(path + ": empty file");
    in.seekg(pos);
    if (first.rfind("v ", 0) == 0) return detail::load_obj(in, path, warnings);
    return detail::load_off(in, path, warnings);
}

/**
 * Reads a solved-map OFF against its source mesh: connectivity must match
 * face for face, and the vertex positions become the map values. No
 * orientation or area validation happens here, since a best-effort map may
 * legitimately fold.
 */
inline PiecewiseLinearMap load_map_off(const std::string& path, const TriangleMesh& mesh)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map file: " + path);
    std::string line;
    if (!detail::next_line(in, line)) throw IoError(path + ": empty OFF file");
    auto toks = detail::tokens(line);
    std::size_t nv = 0, nf = 0;
    if (toks[0] == "OFF" || toks[0] == "off") {
        if (toks.size() >= 3) {
            nv = static_cast<std::size_t>(parse_long(toks[1]));
            nf = static_cast<std::size_t>(parse_long(toks[2]));
        } else {
            if (!detail::next_line(in, line)) throw IoError(path + ": missing OFF count line");
            toks = detail::tokens(line);
            nv = static_cast<std::size_t>(parse_long(toks[0]));
            nf = static_cast<std::size_t>(parse_long(toks[1]));
        }
    } else {
        throw IoError(path + ": not an OFF file");
    }
    if (nv != mesh.vertices.size() || nf != mesh.faces.size()) {
        throw IoError(path + ": map has " + std::to_string(nv) + " vertices / " +
                      std::to_string(nf) + " faces, mesh has " +
                      std::to_string(mesh.vertices.size()) + " / " +
                      std::to_string(mesh.faces.size()));
    }
    PiecewiseLinearMap map;
    map.values.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!detail::next_line(in, line)) throw IoError(path + ": unexpected end of vertex list");
        toks = detail::tokens(line);
        if (toks.size() < 2) throw IoError(path + ": vertex line needs at least 2 coordinates");
        map.values.emplace_back(parse_double(toks[0]), parse_double(toks[1]));
    }
    for (std::size_t i = 0; i < nf; ++i) {
        if (!detail::next_line(in, line)) throw IoError(path + ": unexpected end of face list");
        toks = detail::tokens(line);
        if (toks.size() < 4 || parse_long(toks[0]) != 3) {
            throw IoError(path + ": malformed face line");
        }
        for (int c = 0; c < 3; ++c) {
            if (parse_long(toks[c + 1]) != mesh.faces[i][c]) {
                throw IoError(path + ": face " + std::to_string(i) +
                              " does not match the source mesh connectivity");
            }
        }
    }
    return map;
}

/** Writes vertices (third coordinate zero) and faces as OFF, round-trip exact. */
inline void write_off(const std::string& path, const std::vector<Complex>& vertices,
                      const std::vector<std::array<int, 3>>& faces)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "OFF\n" << vertices.size() << " " << faces.size() << " 0\n";
    for (const auto& v : vertices) {
        out << format_double(v.real()) << " " << format_double(v.imag()) << " 0\n";
    }
    for (const auto& f : faces) {
        out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

/**
 * Reads the constraint CSV: header `vertex_index,target_x,target_y,kind`,
 * kind in {boundary, landmark}, optional `# target_area=<float>` comment.
 * With `require_full_boundary`, every boundary vertex must carry a row.
 */
inline ConstraintSet load_constraints(const std::string& path, const TriangleMesh& mesh,
                                      bool require_full_boundary = false)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open constraints file: " + path);

    std::optional<double> explicit_area;
    std::vector<std::pair<int, Complex>> boundary;
    std::vector<std::pair<int, Complex>> landmarks;
    bool saw_header = false;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            auto eq = t.find("target_area=");
            if (eq != std::string_view::npos) {
                explicit_area = parse_double(trim(t.substr(eq + 12)));
            }
            continue;
        }
        auto cols = split_csv(t);
        if (!saw_header) {
            if (cols.size() != 4 || cols[0] != "vertex_index" || cols[1] != "target_x" ||
                cols[2] != "target_y" || cols[3] != "kind") {
                throw IoError(path + ": expected header 'vertex_index,target_x,target_y,kind'");
            }
            saw_header = true;
            continue;
        }
        if (cols.size() != 4) throw IoError(path + ": row needs 4 columns, got " + std::string(t));
        int v = static_cast<int>(parse_long(cols[0]));
        Complex w(parse_double(cols[1]), parse_double(cols[2]));
        if (cols[3] == "boundary") {
            boundary.emplace_back(v, w);
        } else if (cols[3] == "landmark") {
            landmarks.emplace_back(v, w);
        } else {
            throw IoError(path + ": unknown constraint kind '" + std::string(cols[3]) + "'");
        }
    }
    if (!saw_header) throw IoError(path + ": missing header row");

    auto cs = make_constraints(mesh, std::move(boundary), std::move(landmarks), explicit_area);
    if (require_full_boundary && !covers_full_boundary(mesh, cs)) {
        throw ConstraintError(path + ": fewer boundary rows than boundary vertices "
                              "(full-boundary mode)");
    }
    return cs;
}

inline void write_constraints_csv(const std::string& path, const ConstraintSet& cs,
                                  bool emit_target_area = false)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    if (emit_target_area) {
        out << "# target_area=" << format_double(cs.target_area) << "\n";
    }
    out << "vertex_index,target_x,target_y,kind\n";
    for (const auto& [v, w] : cs.boundary) {
        out << v << "," << format_double(w.real()) << "," << format_double(w.imag())
            << ",boundary\n";
    }
    for (const auto& [v, w] : cs.landmarks) {
        out << v << "," << format_double(w.real()) << "," << format_double(w.imag())
            << ",landmark\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace tqc
