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

// envelope.hpp - L2-normalized Gaussian switching function and its transform

#pragma once

#include <cmath>
#include <numbers>

#include "gdl/errors.hpp"

namespace gdl {

// f(t) = exp(-t^2 / (4 sigma^2)) / sqrt(sigma sqrt(2 pi))
inline double envelope_f(double t, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    return std::exp(-t * t / (4.0 * sigma * sigma)) / std::sqrt(sigma * std::sqrt(2.0 * std::numbers::pi));
}

// fhat(u) = int f(t) exp(iut) dt = 2^{3/4} pi^{1/4} sqrt(sigma) exp(-sigma^2 u^2)
inline double envelope_f_hat(double u, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
    return std::pow(2.0, 0.75) * std::pow(std::numbers::pi, 0.25) * std::sqrt(sigma) * std::exp(-sigma * sigma * u * u);
}

// Time beyond which f / f(0) < 1e-17.
inline double envelope_cutoff(double sigma) { return 2.0 * sigma * std::sqrt(17.0 * std::log(10.0)); }

} // namespace gdl
