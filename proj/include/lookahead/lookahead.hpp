// Copyright 2026 The lookahead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "lookahead/core_arith.hpp"
#include "lookahead/datasets.hpp"
#include "lookahead/error.hpp"
#include "lookahead/evaluator.hpp"
#include "lookahead/heuristic.hpp"
#include "lookahead/mock_model.hpp"
#include "lookahead/predictor.hpp"
#include "lookahead/probing.hpp"
#include "lookahead/rng.hpp"
