// Copyright 2026 The abnirml Authors.
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

#include "abnirml/stats.hpp"

#include <cmath>
#include <limits>

#include "abnirml/error.hpp"

namespace abnirml {

namespace {

/// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_fraction(double a, double b, double x)
{
    constexpr int kMaxIterations = 10000;
    constexpr double kEpsilon = 1e-16;
    constexpr double kTiny = 1e-300;
    double const qab = a + b;
    double const qap = a + 1.0;
    double const qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        double const m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        double const delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEpsilon) {
            break;
        }
    }
    return h;
}

/// I_x(a, b) given both x and 1 - x, so callers can pass an exact complement.
double incomplete_beta(double a, double b, double x, double one_minus_x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (one_minus_x <= 0.0) {
        return 1.0;
    }
    double const log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log(one_minus_x);
    double const front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_fraction(b, a, one_minus_x) / b;
}

}  // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("incomplete beta needs a, b > 0 and x in [0, 1]");
    }
    return incomplete_beta(a, b, x, 1.0 - x);
}

double t_two_sided_p(double t, double df)
{
    if (!(df > 0.0)) {
        throw ValidationError("degrees of freedom must be positive");
    }
    if (std::isnan(t)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2); both x and 1-x are formed
    // directly to avoid cancellation near t = 0 and for large |t|.
    double const t2 = t * t;
    double const x = df / (df + t2);
    double const one_minus_x = t2 / (df + t2);
    return incomplete_beta(df / 2.0, 0.5, x, one_minus_x);
}

double t_cdf(double t, double df)
{
    double const tail = t_two_sided_p(t, df) / 2.0;
    return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(std::span<std::pair<double, double> const> pairs)
{
    auto const n = pairs.size();
    if (n < 2) {
        throw ValidationError("paired t-test needs at least two pairs, got " + std::to_string(n));
    }
    std::vector<double> diffs;
    diffs.reserve(n);
    double sum = 0.0;
    for (auto const& [a, b] : pairs) {
        diffs.push_back(a - b);
        sum += a - b;
    }
    double const mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double d : diffs) {
        ss += (d - mean) * (d - mean);
    }
    double const sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        if (mean == 0.0) {
            return {0.0, 1.0};
        }
        return {std::copysign(std::numeric_limits<double>::infinity(), mean), 0.0};
    }
    double const t = mean / (sd / std::sqrt(static_cast<double>(n)));
    return {t, t_two_sided_p(t, static_cast<double>(n - 1))};
}

std::vector<bool> bonferroni(std::span<double const> p_values, double alpha, std::size_t m)
{
    if (p_values.empty() || m < p_values.size()) {
        throw ValidationError("bonferroni needs m >= number of p-values >= 1");
    }
    double const threshold = alpha / static_cast<double>(m);
    std::vector<bool> out;
    out.reserve(p_values.size());
    for (double p : p_values) {
        out.push_back(p < threshold);
    }
    return out;
}

}  // namespace abnirml
