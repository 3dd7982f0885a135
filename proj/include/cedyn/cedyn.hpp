// Copyright 2026 The ce-dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CEDYN_CEDYN_HPP
#define CEDYN_CEDYN_HPP

#include "cedyn/diagnostics.hpp"
#include "cedyn/error.hpp"
#include "cedyn/game.hpp"
#include "cedyn/game_io.hpp"
#include "cedyn/internal_dynamics.hpp"
#include "cedyn/markov_tree.hpp"
#include "cedyn/metrics.hpp"
#include "cedyn/numeric.hpp"
#include "cedyn/omwu.hpp"
#include "cedyn/output.hpp"
#include "cedyn/rng.hpp"
#include "cedyn/runner.hpp"
#include "cedyn/swap_dynamics.hpp"
#include "cedyn/trace.hpp"

#endif  // CEDYN_CEDYN_HPP
