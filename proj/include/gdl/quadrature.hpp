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

// quadrature.hpp - fixed rules (Gauss-Legendre, Gauss-Hermite, composite)
// and an adaptive Gauss-Kronrod wrapper

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gdl/errors.hpp"

namespace gdl {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
inline QuadRule gauss_legendre(int n) {
    if (n < 1) throw ParameterError("Gauss-Legendre needs at least one node");
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

// n-point Gauss-Hermite for the weight exp(-x^2), via Newton on the
// orthonormal recurrence.
inline QuadRule gauss_hermite(int n) {
    if (n < 1) throw ParameterError("Gauss-Hermite needs at least one node");
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2) z = 1.86 * z - 0.86 * r.nodes[0];
        else if (i == 3) z = 1.91 * z - 0.91 * r.nodes[1];
        else z = 2.0 * z - r.nodes[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    std::vector<double> xs(r.nodes.rbegin(), r.nodes.rend());
    r.nodes = xs;
    return r;
}

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
inline QuadRule composite_legendre(double a, double b, int panels, int per_panel) {
    if (panels < 1) throw ParameterError("need at least one panel");
    const QuadRule base = gauss_legendre(per_panel);
    QuadRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < base.size(); ++i) {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
            r.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return r;
}

// Composite rule with panel width at most max_width.
inline QuadRule composite_legendre_width(double a, double b, double max_width, int per_panel) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_width - 1e-12)));
    return composite_legendre(a, b, panels, per_panel);
}

// Adaptive 31-point Gauss-Kronrod; throws when the error estimate misses tol.
template <class F>
auto integrate_adaptive(F f, double a, double b, double tol = 1e-12, unsigned max_depth = 20) {
    double err = 0.0, l1 = 0.0;
    auto val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err, &l1);
    if (!(err <= 100.0 * tol * std::max(l1, 1e-300)) && err > 1e-14)
        throw ResolutionError("adaptive quadrature did not converge");
    return val;
}

} // namespace gdl
