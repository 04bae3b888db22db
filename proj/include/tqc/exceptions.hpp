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

#include <stdexcept>
#include <string>

namespace tqc {

/** Invalid mesh connectivity or geometry. */
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

/** Invalid boundary/landmark constraint data. */
class ConstraintError : public std::runtime_error {
public:
    explicit ConstraintError(const std::string& msg) : std::runtime_error(msg) {}
};

/** Numerical failure in assembly, factorization, or iteration. */
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/** File parsing or emission failure. */
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tqc
