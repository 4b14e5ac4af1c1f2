#pragma once

// Bounds on the hyperbolic distance travelled along a horizontal half-line zeta + t,
// t <= t0, of a domain whose Euclidean boundary distance along that line is a
// prescribed profile delta(t).  The upper bound integrates 1/delta over the
// segment; the lower bound is 1/4 log(1 + |t - t0| / min delta).  d0 stands for
// the unknown distance from zeta to zeta + t0.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "petallab/errors.hpp"
#include "petallab/numerics.hpp"

namespace petallab {

struct BoundaryProfile {
    std::string name;
    std::function<double(double)> log_delta;  ///< log delta(t), t <= t0
    double t0 = -1.0;
    double d0 = 1.0;
    std::optional<double> t_min;  ///< lower end of validity for tabulated profiles
    /// Closed form of the integral of 1/delta over [t, t0], when known.
    std::function<double(double)> integral;

    double delta(double t) const { return std::exp(log_delta(t)); }

    /// delta(t) = 1/ln(-t); requires t0 <= -e.
    static BoundaryProfile logrecip(double t0 = -std::numbers::e, double d0 = 1.0) {
        if (t0 > -std::numbers::e + 1e-15) throw DomainError("logrecip profile needs t0 <= -e");
        BoundaryProfile p;
        p.name = "logrecip";
        p.t0 = t0;
        p.d0 = d0;
        p.log_delta = [](double t) { return -std::log(std::log(-t)); };
        // integral of ln u over u in [-t0, -t]
        p.integral = [t0](double t) {
            auto F = [](double u) { return u * std::log(u) - u; };
            return F(-t) - F(-t0);
        };
        return p;
    }

    /// delta(t) = -t e^{-t^2}.
    static BoundaryProfile gaussian(double t0 = -1.0, double d0 = 1.0) {
        if (!(t0 < 0.0)) throw DomainError("gaussian profile needs t0 < 0");
        BoundaryProfile p;
        p.name = "gaussian";
        p.t0 = t0;
        p.d0 = d0;
        p.log_delta = [](double t) { return std::log(-t) - t * t; };
        return p;
    }

    static BoundaryProfile custom(std::function<double(double)> delta, double t0, double d0 = 1.0) {
        BoundaryProfile p;
        p.name = "custom";
        p.t0 = t0;
        p.d0 = d0;
        p.log_delta = [delta = std::move(delta)](double t) { return std::log(delta(t)); };
        return p;
    }

    /// Tabulated (t, delta) pairs, interpolated linearly in log delta.  t0 is the
    /// largest tabulated abscissa unless given.
    static BoundaryProfile tabulated(std::vector<std::pair<double, double>> table, std::optional<double> t0 = std::nullopt,
                                     double d0 = 1.0) {
        if (table.size() < 2) throw DomainError("tabulated profile needs at least two rows");
        std::sort(table.begin(), table.end());
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (!(table[i].second > 0.0)) throw DomainError("tabulated profile: delta must be positive");
            if (i > 0 && table[i].first == table[i - 1].first) throw DomainError("tabulated profile: repeated abscissa");
        }
        std::vector<double> ts, ls;
        for (const auto& [t, d] : table) {
            ts.push_back(t);
            ls.push_back(std::log(d));
        }
        BoundaryProfile p;
        p.name = "custom";
        p.t0 = t0.value_or(ts.back());
        p.d0 = d0;
        p.t_min = ts.front();
        if (p.t0 > ts.back() || p.t0 < ts.front()) throw DomainError("tabulated profile: t0 outside the table");
        p.log_delta = [ts, ls](double t) {
            if (t < ts.front() || t > ts.back()) throw DomainError("tabulated profile: t outside the table");
            const auto it = std::upper_bound(ts.begin(), ts.end(), t);
            const std::size_t i = std::clamp<std::size_t>(it - ts.begin(), 1, ts.size() - 1);
            const double u = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
            return ls[i - 1] + u * (ls[i] - ls[i - 1]);
        };
        return p;
    }

    /// Two-column text file "t delta"; blank lines and '#' comments are skipped.
    static BoundaryProfile from_file(const std::string& path, std::optional<double> t0 = std::nullopt, double d0 = 1.0) {
        std::ifstream in(path);
        if (!in) throw DomainError("cannot open profile file " + path);
        std::vector<std::pair<double, double>> table;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double t, d;
            if (!(row >> t >> d)) throw DomainError(path + ":" + std::to_string(lineno) + ": expected two numbers");
            table.emplace_back(t, d);
        }
        return tabulated(std::move(table), t0, d0);
    }
};

inline BoundaryProfile profile_by_name(const std::string& name) {
    if (name == "logrecip") return BoundaryProfile::logrecip();
    if (name == "gaussian") return BoundaryProfile::gaussian();
    return BoundaryProfile::from_file(name);
}

namespace detail {

inline void check_segment(const BoundaryProfile& p, double t) {
    if (!(t <= p.t0)) throw DomainError("bounds: t must not exceed t0 of profile " + p.name);
    if (p.t_min && t < *p.t_min) throw DomainError("bounds: t below the tabulated range of profile " + p.name);
}

}  // namespace detail

/// d0 plus the integral of ds/delta(s) over [t, t0].  Infinite when the
/// integrand overflows.
inline double upper_bound(const BoundaryProfile& p, double t) {
    detail::check_segment(p, t);
    if (t == p.t0) return p.d0;
    if (p.integral) return p.d0 + p.integral(t);
    auto f = [&p](double s) {
        const double v = std::exp(-p.log_delta(s));
        if (!std::isfinite(v) || v <= 0.0) throw DomainError("bounds: profile not positive and finite on the segment");
        return v;
    };
    double err = 0.0;
    double value;
    try {
        value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, t, p.t0, 20, 1e-14, &err);
    } catch (const DomainError&) {
        if (std::isinf(std::exp(-p.log_delta(t)))) return std::numeric_limits<double>::infinity();
        throw;
    }
    return p.d0 + value;
}

/// 1/4 log(1 + |t - t0| / min(delta(t), delta(t0))) - d0, evaluated in log space.
inline double lower_bound(const BoundaryProfile& p, double t) {
    detail::check_segment(p, t);
    if (t == p.t0) return -p.d0;
    const double log_min = std::min(p.log_delta(t), p.log_delta(p.t0));
    return 0.25 * numerics::softplus(std::log(std::abs(t - p.t0)) - log_min) - p.d0;
}

enum class BoundKind { upper, lower };

struct RatioPoint {
    double t;
    double ratio;
};

enum class Trend { decreasing, increasing, mixed, flat };

struct RatioSeries {
    std::vector<RatioPoint> points;
    Trend trend = Trend::flat;
};

inline std::string to_string(Trend t) {
    switch (t) {
        case Trend::decreasing: return "decreasing";
        case Trend::increasing: return "increasing";
        case Trend::mixed: return "mixed";
        case Trend::flat: return "flat";
    }
    return "?";
}

/// bound(t)/t^2 per grid point, with the trend as |t| grows along the grid.
inline RatioSeries bound_ratio_series(const BoundaryProfile& p, const std::vector<double>& grid, BoundKind kind) {
    RatioSeries s;
    for (const double t : grid) {
        const double b = kind == BoundKind::upper ? upper_bound(p, t) : lower_bound(p, t);
        s.points.push_back({t, b / (t * t)});
    }
    bool dec = s.points.size() > 1, inc = s.points.size() > 1;
    for (std::size_t i = 1; i < s.points.size(); ++i) {
        dec = dec && s.points[i].ratio < s.points[i - 1].ratio;
        inc = inc && s.points[i].ratio > s.points[i - 1].ratio;
    }
    s.trend = dec ? Trend::decreasing : inc ? Trend::increasing : s.points.size() > 1 ? Trend::mixed : Trend::flat;
    return s;
}

}  // namespace petallab
