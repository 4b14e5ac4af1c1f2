#pragma once

// Hyperbolic geometry of the three canonical simply connected domains: the
// unit disk, the upper half-plane and the strip {|Im z| < pi/2}.
//
// Distances use the normalization d = arctanh(pseudo-hyperbolic distance),
// i.e. the metric with density 1/(1-|z|^2) on the disk.  Every distance is
// evaluated in a subtraction-free logarithmic form so that points close to the
// boundary (or far apart in the strip) keep full relative accuracy.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "petallab/errors.hpp"

namespace petallab {

using Point = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Point kI{0.0, 1.0};

/// Boundary point of a canonical domain, possibly the point at infinity.
struct BoundaryPoint {
    enum class Kind { finite, infinity };

    Kind kind = Kind::infinity;
    Point value{};

    static BoundaryPoint finite(Point v) { return {Kind::finite, v}; }
    static BoundaryPoint at_infinity() { return {Kind::infinity, {}}; }

    bool is_infinite() const { return kind == Kind::infinity; }

    friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

enum class CanonicalDomain { Disk, UpperHalfPlane, StripPi };

inline std::string to_string(CanonicalDomain d) {
    switch (d) {
        case CanonicalDomain::Disk: return "Disk";
        case CanonicalDomain::UpperHalfPlane: return "UpperHalfPlane";
        case CanonicalDomain::StripPi: return "StripPi";
    }
    return "?";
}

inline bool is_finite(Point z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool contains(CanonicalDomain d, Point z) {
    if (!is_finite(z)) return false;
    switch (d) {
        case CanonicalDomain::Disk: return std::abs(z) < 1.0;
        case CanonicalDomain::UpperHalfPlane: return z.imag() > 0.0;
        case CanonicalDomain::StripPi: return std::abs(z.imag()) < kPi / 2;
    }
    return false;
}

/// True when b lies on the boundary of d (tolerance 1e-12).
inline bool on_boundary(CanonicalDomain d, const BoundaryPoint& b) {
    switch (d) {
        case CanonicalDomain::Disk:
            return !b.is_infinite() && std::abs(std::abs(b.value) - 1.0) <= 1e-12;
        case CanonicalDomain::UpperHalfPlane:
            return b.is_infinite() || std::abs(b.value.imag()) <= 1e-12;
        case CanonicalDomain::StripPi:
            return b.is_infinite() || std::abs(std::abs(b.value.imag()) - kPi / 2) <= 1e-12;
    }
    return false;
}

/// Moebius transformation z -> (a z + b) / (c z + d).
struct Mobius {
    Point a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Point det() const { return a * d - b * c; }

    Point operator()(Point z) const { return (a * z + b) / (c * z + d); }

    BoundaryPoint operator()(const BoundaryPoint& p) const {
        if (p.is_infinite()) {
            if (c == Point{}) return BoundaryPoint::at_infinity();
            return BoundaryPoint::finite(a / c);
        }
        const Point den = c * p.value + d;
        if (den == Point{}) return BoundaryPoint::at_infinity();
        return BoundaryPoint::finite((a * p.value + b) / den);
    }

    Point derivative(Point z) const {
        const Point den = c * z + d;
        return det() / (den * den);
    }

    Mobius inverse() const { return {d, -b, -c, a}; }

    /// (*this) o other
    Mobius after(const Mobius& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    static Mobius translation(Point s) { return {1.0, s, 0.0, 1.0}; }
};

/// Cayley map from the upper half-plane onto the disk, q -> (q - i)/(q + i).
inline Mobius cayley() { return {1.0, -kI, 1.0, kI}; }

/// 1 - |z|^2 computed as (1 - |z|)(1 + |z|).
inline double disk_gap(Point z) {
    const double r = std::abs(z);
    return (1.0 - r) * (1.0 + r);
}

namespace detail {

// Distance from the pair (A, B) where B/A is the pseudo-hyperbolic distance and
// A^2 - B^2 = exp(log_prod); both branches avoid cancellation.
inline double half_log_distance(double A, double B, double log_prod) {
    if (B == 0.0) return 0.0;
    const double rho = B / A;
    if (rho < 0.5) return std::atanh(rho);
    return std::log(A + B) - 0.5 * log_prod;
}

}  // namespace detail

/// Hyperbolic distance in the disk when 1-|z|^2 and 1-|w|^2 are known exactly.
inline double disk_distance(Point z, Point w, double gap_z, double gap_w) {
    if (!(gap_z > 0.0) || !(gap_w > 0.0) || !is_finite(z) || !is_finite(w))
        throw DomainError("disk_distance: point outside the open unit disk");
    const double A = std::abs(1.0 - std::conj(z) * w);
    const double B = std::abs(z - w);
    return detail::half_log_distance(A, B, std::log(gap_z) + std::log(gap_w));
}

inline double disk_distance(Point z, Point w) {
    if (!contains(CanonicalDomain::Disk, z) || !contains(CanonicalDomain::Disk, w))
        throw DomainError("disk_distance: point outside the open unit disk");
    return disk_distance(z, w, disk_gap(z), disk_gap(w));
}

inline double uhp_distance(Point x, Point y) {
    if (!contains(CanonicalDomain::UpperHalfPlane, x) ||
        !contains(CanonicalDomain::UpperHalfPlane, y))
        throw DomainError("uhp_distance: point outside the upper half-plane");
    const double A = std::abs(x - std::conj(y));
    const double B = std::abs(x - y);
    return detail::half_log_distance(A, B, std::log(4.0) + (std::log(x.imag()) + std::log(y.imag())));
}

/// Distance in S = {|Im z| < pi/2}, via exp into the right half-plane with both
/// exponentials scaled by exp(-max(Re z, Re w)).
inline double strip_distance(Point z, Point w) {
    if (!contains(CanonicalDomain::StripPi, z) || !contains(CanonicalDomain::StripPi, w))
        throw DomainError("strip_distance: point outside the strip |Im z| < pi/2");
    const double m = std::max(z.real(), w.real());
    const Point X = std::exp(z - m);
    const Point Y = std::exp(w - m);
    const double A = std::abs(X + std::conj(Y));
    const double B = std::abs(X - Y);
    const double log_re_x = (z.real() - m) + std::log(std::cos(z.imag()));
    const double log_re_y = (w.real() - m) + std::log(std::cos(w.imag()));
    return detail::half_log_distance(A, B, std::log(4.0) + log_re_x + log_re_y);
}

/// A point p of the upper half-plane stored as log p (0 < Im log p < pi).
/// Lets orbits run far past the range of double without losing the angle.
struct UhpLog {
    Point log;

    static UhpLog of(Point p) { return {std::log(p)}; }

    bool valid() const { return is_finite(log) && log.imag() > 0.0 && log.imag() < kPi; }

    /// log Im p
    double log_height() const { return log.real() + std::log(std::sin(log.imag())); }
};

/// log maps the half-plane isometrically onto {0 < Im < pi}.
inline double uhp_distance(const UhpLog& x, const UhpLog& y) {
    if (!x.valid() || !y.valid()) throw DomainError("uhp_distance: invalid logarithmic point");
    const Point shift{0.0, kPi / 2};
    return strip_distance(x.log - shift, y.log - shift);
}

struct VerticalProjection {
    double log_height;  ///< foot = a + i exp(log_height)
    double dist;
};

/// Projection of p onto the vertical geodesic Re z = a.
inline VerticalProjection project_to_vertical(const UhpLog& p, double a) {
    if (!p.valid()) throw DomainError("project_to_vertical: invalid logarithmic point");
    Point rel;  // log(p - a)
    if (p.log.real() < 600.0) {
        rel = std::log(std::exp(p.log) - a);
    } else {
        rel = p.log + std::log(1.0 - a * std::exp(-p.log));
    }
    const double theta = rel.imag();
    return {rel.real(), 0.5 * std::abs(std::log(std::tan(theta / 2)))};
}

/// Hyperbolic geodesic of the disk or the upper half-plane.  The normalizer is a
/// domain automorphism sending endpoints[0] -> 0 and endpoints[1] -> infinity
/// (half-plane) or endpoints[0] -> -1 and endpoints[1] -> 1 (disk).
struct Geodesic {
    CanonicalDomain domain;
    std::array<BoundaryPoint, 2> endpoints;
    Mobius normalizer;
};

namespace detail {

inline Mobius uhp_axis_normalizer(const BoundaryPoint& e0, const BoundaryPoint& e1) {
    if (e1.is_infinite()) return {1.0, -e0.value.real(), 0.0, 1.0};
    const double x1 = e1.value.real();
    if (e0.is_infinite()) return {0.0, -1.0, 1.0, -x1};
    const double x0 = e0.value.real();
    const double s = x0 > x1 ? 1.0 : -1.0;
    return {s, -s * x0, 1.0, -x1};
}

inline BoundaryPoint snap_real(const BoundaryPoint& b) {
    if (b.is_infinite()) return b;
    return BoundaryPoint::finite({b.value.real(), 0.0});
}

inline bool same_point(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return std::abs(a.value - b.value) <= 1e-14 * (1.0 + std::abs(a.value));
}

}  // namespace detail

inline Geodesic geodesic_between(CanonicalDomain domain, const BoundaryPoint& e0,
                                 const BoundaryPoint& e1) {
    if (domain == CanonicalDomain::StripPi)
        throw DomainError("geodesics are represented in the disk or the upper half-plane only");
    if (!on_boundary(domain, e0) || !on_boundary(domain, e1))
        throw DomainError("geodesic endpoint not on the boundary");
    if (detail::same_point(e0, e1)) throw DomainError("geodesic endpoints coincide");
    if (domain == CanonicalDomain::UpperHalfPlane) {
        const auto a = detail::snap_real(e0), b = detail::snap_real(e1);
        return {domain, {a, b}, detail::uhp_axis_normalizer(a, b)};
    }
    const Mobius C = cayley();
    const Mobius Cinv = C.inverse();
    const auto u0 = detail::snap_real(Cinv(e0));
    const auto u1 = detail::snap_real(Cinv(e1));
    const Mobius N = C.after(detail::uhp_axis_normalizer(u0, u1)).after(Cinv);
    return {domain, {e0, e1}, N};
}

/// Full geodesic through an interior point with one prescribed endpoint; the
/// prescribed endpoint becomes endpoints[1].
inline Geodesic geodesic_through(CanonicalDomain domain, Point interior, const BoundaryPoint& endpoint) {
    if (domain == CanonicalDomain::StripPi)
        throw DomainError("geodesics are represented in the disk or the upper half-plane only");
    if (!contains(domain, interior)) throw DomainError("geodesic_through: interior point outside domain");
    if (!on_boundary(domain, endpoint)) throw DomainError("geodesic_through: endpoint not on the boundary");

    if (domain == CanonicalDomain::Disk) {
        const Mobius Cinv = cayley().inverse();
        const Geodesic g = geodesic_through(CanonicalDomain::UpperHalfPlane, Cinv(interior),
                                            detail::snap_real(Cinv(endpoint)));
        const Mobius C = cayley();
        auto back = [&](const BoundaryPoint& u) {
            auto b = C(u);
            b.value /= std::abs(b.value);
            return b;
        };
        return geodesic_between(domain, back(g.endpoints[0]), endpoint);
    }

    const auto e = detail::snap_real(endpoint);
    BoundaryPoint other;
    if (e.is_infinite()) {
        other = BoundaryPoint::finite({interior.real(), 0.0});
    } else {
        const double x = e.value.real();
        const double dx = interior.real() - x;
        if (dx == 0.0) {
            other = BoundaryPoint::at_infinity();
        } else {
            // centre of the orthogonal circle through x and the interior point
            const double c = x + (dx * dx + interior.imag() * interior.imag()) / (2.0 * dx);
            other = BoundaryPoint::finite({2.0 * c - x, 0.0});
        }
    }
    return geodesic_between(domain, other, e);
}

struct Projection {
    Point foot;
    double dist;
};

/// Closest point of g to w and the distance to it.
inline Projection project_to_geodesic(Point w, const Geodesic& g) {
    if (!contains(g.domain, w)) throw DomainError("project_to_geodesic: point outside domain");
    const Mobius C = cayley();
    Point q = g.normalizer(w);
    if (g.domain == CanonicalDomain::Disk) q = C.inverse()(q);
    const double theta = std::arg(q);
    const double dist = 0.5 * std::abs(std::log(std::tan(theta / 2)));
    Point foot{0.0, std::abs(q)};
    if (g.domain == CanonicalDomain::Disk) foot = C(foot);
    return {g.normalizer.inverse()(foot), dist};
}

}  // namespace petallab
