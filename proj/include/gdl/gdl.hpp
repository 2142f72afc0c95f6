// Copyright 2026 The gdl Authors
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

// gdl.hpp - umbrella header for the numerical library (no CLI pieces)

#pragma once

#include "gdl/errors.hpp"
#include "gdl/operator_core.hpp"
#include "gdl/model.hpp"
#include "gdl/quadrature.hpp"
#include "gdl/parallel.hpp"
#include "gdl/envelope.hpp"
#include "gdl/time_randomization.hpp"
#include "gdl/lindblad_generator.hpp"
#include "gdl/kms_analysis.hpp"
#include "gdl/bath_channel.hpp"
#include "gdl/experiments.hpp"
