#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "petallab/errors.hpp"
#include "petallab/hypcore.hpp"
#include "petallab/numerics.hpp"

namespace petallab {

/// Counterclockwise arc of the unit circle from angle alpha to beta.
struct Arc {
    double alpha = 0.0;
    double beta = 0.0;

    static Arc make(double alpha, double beta) {
        const double len = beta - alpha;
        if (!(len > 0.0 && len < 2 * kPi)) throw DomainError("Arc: length must lie in (0, 2 pi)");
        double a = std::fmod(alpha, 2 * kPi);
        if (a < 0.0) a += 2 * kPi;
        return {a, a + len};
    }

    /// Arc of the given length starting at the boundary point a.
    static Arc starting_at(Point a, double length) { return make(std::arg(a), std::arg(a) + length); }

    double length() const { return beta - alpha; }
    Arc complement() const { return make(beta, alpha + 2 * kPi); }
};

/// Harmonic measure of the arc seen from z: the normalized length of the arc
/// after the automorphism w -> (w - z)/(1 - conj(z) w) moves z to the origin.
inline double harmonic_measure(Point z, const Arc& arc) {
    if (!(std::abs(z) < 1.0)) throw DomainError("harmonic_measure: point outside the open disk");
    auto move = [z](double angle) {
        const Point w = std::polar(1.0, angle);
        return (w - z) / (1.0 - std::conj(z) * w);
    };
    const Point a = move(arc.alpha);
    const Point b = move(arc.beta);
    double len = std::arg(b / a);
    if (len < 0.0) len += 2 * kPi;
    // a full-length arc would collapse to 0 above; lengths never reach 2 pi here
    if (len == 0.0 && arc.length() > kPi) len = 2 * kPi;
    return len / (2 * kPi);
}

struct ApproachReport {
    double theta = 0.0;       ///< pi times the extrapolated limit of the measures
    std::vector<double> measures;
    bool inconclusive = false;
    bool tangential = false;
};

/// Angle of approach of a sequence tending to a on the circle, read off from the
/// limit of harmonic measures of an arc E ending at a.
/// Points closer to a than `resolution` are skipped: in double precision their
/// offset from a no longer carries the direction of approach.
inline ApproachReport approach_angle(std::span<const Point> points, Point a, const Arc& arc, double angle_tol = 1e-2,
                                     double resolution = 1e-8) {
    ApproachReport r;
    double last_gap = INFINITY;
    for (const Point z : points) {
        if (!(1.0 - std::abs(z) > 1e-250) || std::abs(z - a) < resolution) continue;
        r.measures.push_back(harmonic_measure(z, arc));
        last_gap = std::abs(z - a);
    }
    const std::size_t n = r.measures.size();
    // the sequence has to be visibly heading for a
    if (n < 5 || last_gap > 1e-2) {
        r.inconclusive = true;
        return r;
    }
    const auto last5 = std::span<const double>(r.measures).last(5);
    const auto [lo, hi] = std::minmax_element(last5.begin(), last5.end());
    if (*hi - *lo > 0.05) r.inconclusive = true;

    const auto tail = std::span<const double>(r.measures).last(std::min<std::size_t>(n, 8));
    std::vector<double> acc;
    for (std::size_t i = 2; i < tail.size(); ++i) acc.push_back(numerics::aitken(tail.subspan(i - 2, 3)));
    const double limit = acc.empty() ? tail.back() : acc.back();
    r.theta = kPi * std::clamp(limit, 0.0, 1.0);
    r.tangential = !r.inconclusive && (r.theta < angle_tol || kPi - r.theta < angle_tol);
    return r;
}

}  // namespace petallab
