/*
 * Copyright 2026 The Synergy Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "synergy/axioms.hpp"
#include "synergy/combinatorics.hpp"
#include "synergy/core.hpp"
#include "synergy/error.hpp"
#include "synergy/expr.hpp"
#include "synergy/grad_exact.hpp"
#include "synergy/grad_numeric.hpp"
#include "synergy/json_io.hpp"
#include "synergy/polynomial.hpp"
#include "synergy/random.hpp"
#include "synergy/set_methods.hpp"
