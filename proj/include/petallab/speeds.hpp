#pragma once

// Total, orthogonal and tangential speeds of a petal along backward orbits.
//
// Everything is measured in the canonical half-plane after the automorphism
// N_e that sends the geodesic's far endpoint e (sigma, or the Denjoy-Wolff
// point for a parabolic petal) to infinity.  There the geodesic eta through the
// base point is the vertical line Re = a, so projection and both distances have
// closed forms, and the orbit is carried by its logarithm (model charts), which
// keeps |t| = 2^16 and beyond within double range.

#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "petallab/confmap.hpp"
#include "petallab/errors.hpp"
#include "petallab/hypcore.hpp"
#include "petallab/models.hpp"
#include "petallab/numerics.hpp"
#include "petallab/semigroup.hpp"

namespace petallab {

struct SpeedSample {
    double t = 0.0;
    double v = 0.0;
    double v_o = 0.0;
    double v_T = 0.0;
};

struct SpeedSeries {
    std::string model;
    std::string petal;
    Point base{};
    std::vector<double> grid;
    std::vector<SpeedSample> samples;
};

namespace detail {

inline void require_in_petal(const KoenigsModel& m, const Petal& petal, Point z) {
    if (!m.membership(z) || !petal.region.contains(z))
        throw PetalRequiredError("speeds: base point " + fmt17(z.real()) + (z.imag() < 0 ? "" : "+") + fmt17(z.imag()) +
                                 "i is not inside petal '" + petal.id + "' of " + m.name);
}

// log(a + i e^{lh}), keeping the angle when e^{lh} overflows.
inline UhpLog vertical_point(double a, double lh) {
    if (lh < 600.0) return UhpLog::of(Point{a, std::exp(lh)});
    return {Point{lh, kPi / 2} + std::log(1.0 - Point{0.0, a * std::exp(-lh)})};
}

}  // namespace detail

/// Speeds of `petal` at time t <= 0 from base point z.  The geodesic eta is the
/// one through eta_base (z by default) ending at the petal's endpoint; passing a
/// different eta_base gives the shared-geodesic variants used when comparing
/// two base points.
inline SpeedSample petal_speeds(const KoenigsModel& m, const Petal& petal, Point z, double t,
                                std::optional<Point> eta_base = std::nullopt) {
    detail::require_in_petal(m, petal, z);
    if (t > 0.0) throw DomainError("petal speeds are defined for t <= 0");
    const Point zeta = eta_base.value_or(z);
    detail::require_in_petal(m, petal, zeta);

    const BoundaryPoint& e = petal.endpoint();
    const UhpLog Lz = m.normalized_log(OmegaPoint::direct(z), e);
    const UhpLog Lt = m.normalized_log(flow(m, z, t).omega, e);
    const double a = std::exp(m.normalized_log(OmegaPoint::direct(zeta), e).log).real();

    SpeedSample s;
    s.t = t;
    if (t == 0.0 && !eta_base) return s;
    s.v = uhp_distance(Lz, Lt);
    const VerticalProjection proj = project_to_vertical(Lt, a);
    s.v_T = proj.dist;
    s.v_o = uhp_distance(Lz, detail::vertical_point(a, proj.log_height));
    return s;
}

inline double total_speed(const KoenigsModel& m, const Petal& petal, Point z, double t) {
    return petal_speeds(m, petal, z, t).v;
}
inline double orthogonal_speed(const KoenigsModel& m, const Petal& petal, Point z, double t) {
    return petal_speeds(m, petal, z, t).v_o;
}
inline double tangential_speed(const KoenigsModel& m, const Petal& petal, Point z, double t) {
    return petal_speeds(m, petal, z, t).v_T;
}

/// d_D(z, phi_t(z)) for t >= 0, any z in Omega.
inline double forward_speed(const KoenigsModel& m, Point z, double t) {
    if (t < 0.0) throw DomainError("forward_speed: t must be >= 0");
    if (t == 0.0) return 0.0;
    const BoundaryPoint inf = BoundaryPoint::at_infinity();
    return uhp_distance(m.normalized_log(OmegaPoint::direct(z), inf), m.normalized_log(flow(m, z, t).omega, inf));
}

/// t_k = -2^k for k = kmin..kmax (strictly decreasing).
inline std::vector<double> dyadic_grid(int kmin, int kmax, double sign = -1.0) {
    if (kmax < kmin) throw DomainError("dyadic_grid: kmax < kmin");
    std::vector<double> g;
    for (int k = kmin; k <= kmax; ++k) g.push_back(sign * std::ldexp(1.0, k));
    return g;
}

inline SpeedSeries speed_series(const KoenigsModel& m, const Petal& petal, Point z, std::span<const double> grid,
                                std::optional<Point> eta_base = std::nullopt) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] < grid[i - 1])) throw DomainError("speed_series: grid must be strictly decreasing");
    SpeedSeries s{m.name, petal.id, z, {grid.begin(), grid.end()}, {}};
    s.samples.reserve(grid.size());
    for (const double t : grid) s.samples.push_back(petal_speeds(m, petal, z, t, eta_base));
    return s;
}

enum class SlopeMode { linear_in_t, linear_in_log };
enum class SpeedColumn { total, orthogonal, tangential };

inline double column(const SpeedSample& s, SpeedColumn c) {
    switch (c) {
        case SpeedColumn::total: return s.v;
        case SpeedColumn::orthogonal: return s.v_o;
        case SpeedColumn::tangential: return s.v_T;
    }
    return s.v;
}

/// Least-squares slope over the tail half of the samples.
inline numerics::LineFit slope_estimate(std::span<const SpeedSample> samples, SlopeMode mode,
                                        SpeedColumn col = SpeedColumn::total) {
    if (samples.size() < 6) throw EstimationError("slope_estimate: need at least 6 samples");
    std::vector<double> x, y;
    for (std::size_t i = samples.size() / 2; i < samples.size(); ++i) {
        const double t = samples[i].t;
        if (mode == SlopeMode::linear_in_log) {
            if (t == 0.0) throw EstimationError("slope_estimate: log|t| undefined at t = 0");
            x.push_back(std::log(std::abs(t)));
        } else {
            x.push_back(t);
        }
        y.push_back(column(samples[i], col));
    }
    return numerics::least_squares(x, y);
}

inline numerics::LineFit slope_estimate(const SpeedSeries& s, SlopeMode mode, SpeedColumn col = SpeedColumn::total) {
    return slope_estimate(std::span<const SpeedSample>(s.samples), mode, col);
}

/// Empirical monotonicity of v in |t|; a warning signal only.
inline bool total_speed_monotone(const SpeedSeries& s, double slack = 1e-9) {
    for (std::size_t i = 1; i < s.samples.size(); ++i)
        if (s.samples[i].v + slack < s.samples[i - 1].v) return false;
    return true;
}

inline void write_csv(std::ostream& out, const SpeedSeries& s) {
    out << "t,v,v_o,v_T\n";
    for (const auto& r : s.samples)
        out << detail::fmt17(r.t) << ',' << detail::fmt17(r.v) << ',' << detail::fmt17(r.v_o) << ',' << detail::fmt17(r.v_T) << '\n';
}

}  // namespace petallab
