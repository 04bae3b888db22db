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
#include "tqc/diagnostics.hpp"
#include "tqc/energy.hpp"
#include "tqc/exceptions.hpp"
#include "tqc/format.hpp"
#include "tqc/lbs.hpp"
#include "tqc/mesh.hpp"
#include "tqc/mesh_io.hpp"
#include "tqc/qc_iteration.hpp"
#include "tqc/testcases.hpp"
