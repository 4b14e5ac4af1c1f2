#pragma once

// Small numeric helpers shared by the speed, generator and harmonic-measure code.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "petallab/errors.hpp"

namespace petallab::numerics {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw EstimationError("least_squares: need at least two paired samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw EstimationError("least_squares: abscissae are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

/// Repeated Richardson elimination for a sequence sampled at step h_k = h_0 2^-k
/// whose error expands in integer powers of h.  Returns the last diagonal entry.
template <class T>
T richardson(std::span<const T> seq, int levels = 3) {
    if (seq.empty()) throw EstimationError("richardson: empty sequence");
    std::vector<T> col(seq.begin(), seq.end());
    for (int j = 1; j <= levels && col.size() > 1; ++j) {
        const double f = std::ldexp(1.0, j);
        std::vector<T> next;
        for (std::size_t i = 1; i < col.size(); ++i) next.push_back((f * col[i] - col[i - 1]) / (f - 1.0));
        col = std::move(next);
    }
    return col.back();
}

/// Aitken delta-squared on the last three terms; falls back to the last term
/// when the second difference vanishes.
inline double aitken(std::span<const double> seq) {
    const std::size_t n = seq.size();
    if (n == 0) throw EstimationError("aitken: empty sequence");
    if (n < 3) return seq.back();
    const double a = seq[n - 3], b = seq[n - 2], c = seq[n - 1];
    const double denom = (c - b) - (b - a);
    if (std::abs(denom) < 1e-300) return c;
    const double acc = c - (c - b) * (c - b) / denom;
    return std::isfinite(acc) ? acc : c;
}

/// log(1 + e^x) without overflow.
inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace petallab::numerics
