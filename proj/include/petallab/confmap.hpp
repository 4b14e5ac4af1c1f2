#pragma once

// Elementary conformal map steps and invertible chains of them.  A chain links
// a Koenigs domain to a canonical domain; each step knows its inverse, its
// derivative and the branch it uses, and refuses points on (or within 1e-12 of)
// its branch cut instead of guessing a side.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "petallab/hypcore.hpp"

namespace petallab {

inline constexpr double kCutMargin = 1e-12;

namespace detail {

/// arg z taken in [lo, lo + 2 pi)
inline double arg_from(Point z, double lo) {
    double t = std::arg(z);
    while (t < lo) t += 2 * kPi;
    while (t >= lo + 2 * kPi) t -= 2 * kPi;
    return t;
}

/// Euclidean distance from z to the ray {r e^{i angle} : r >= 0}.
inline double distance_to_ray(Point z, double angle) {
    const Point dir = std::polar(1.0, angle);
    const Point rel = z * std::conj(dir);  // rotate the ray onto [0, inf)
    if (rel.real() <= 0.0) return std::abs(z);
    return std::abs(rel.imag());
}

/// Distance from z to the segment [p, q].
inline double distance_to_segment(Point z, Point p, Point q) {
    const Point d = q - p;
    const double t = std::clamp(std::real((z - p) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

/// Square root landing in the closed upper half-plane.
inline Point sqrt_upper(Point z) {
    Point s = std::sqrt(z);
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
    return s;
}

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

/// One elementary conformal map.
///
///  Affine(a, b)      z -> a z + b
///  Exp(lo, hi)       z -> e^z on the strip lo < Im z < hi (hi - lo <= 2 pi)
///  Log(lo, hi)       z -> log z with arg z in (lo, hi)
///  Power(alpha, lo, hi)  z -> exp(alpha log z) with arg z in (lo, hi)
///  Mobius(a, b, c, d)
///  SlitClose         z -> sqrt(z^2 + 1), upper half-plane minus (0, i] onto the upper half-plane
///  SlitOpen          w -> sqrt(w^2 - 1), its inverse
///
/// For Log and Power the branch cut is the ray at angle hi when the window is a
/// full turn, otherwise the ray bisecting the excluded sector.
struct MapStep {
    enum class Kind { Affine, Exp, Log, Power, Mobius, SlitClose, SlitOpen };

    Kind kind = Kind::Affine;
    Point a{1.0}, b{0.0}, c{0.0}, d{1.0};
    double alpha = 1.0;
    double lo = -kPi;
    double hi = kPi;

    static MapStep affine(Point a, Point b) {
        if (a == Point{}) throw DomainError("Affine step needs a != 0");
        MapStep s;
        s.kind = Kind::Affine;
        s.a = a;
        s.b = b;
        return s;
    }
    static MapStep exp(double lo = -kPi, double hi = kPi) { return windowed(Kind::Exp, 1.0, lo, hi); }
    static MapStep log(double lo = -kPi, double hi = kPi) { return windowed(Kind::Log, 1.0, lo, hi); }
    static MapStep power(double alpha, double lo = -kPi, double hi = kPi) {
        if (!(alpha > 0.0)) throw DomainError("Power step needs alpha > 0");
        return windowed(Kind::Power, alpha, lo, hi);
    }
    static MapStep mobius(Point a, Point b, Point c, Point d) {
        if (a * d - b * c == Point{}) throw DomainError("Mobius step needs ad - bc != 0");
        MapStep s;
        s.kind = Kind::Mobius;
        s.a = a;
        s.b = b;
        s.c = c;
        s.d = d;
        return s;
    }
    static MapStep mobius(const Mobius& m) { return mobius(m.a, m.b, m.c, m.d); }
    static MapStep slit_close() {
        MapStep s;
        s.kind = Kind::SlitClose;
        return s;
    }
    static MapStep slit_open() {
        MapStep s;
        s.kind = Kind::SlitOpen;
        return s;
    }

    /// Angle of the branch cut ray (Log, Power).
    double cut_angle() const {
        const double width = hi - lo;
        if (width >= 2 * kPi) return hi;
        return hi + (2 * kPi - width) / 2;
    }

    /// Empty when z is admissible, otherwise the reason it is not.
    std::optional<std::string> reject(Point z) const {
        if (!is_finite(z)) return "non-finite argument";
        switch (kind) {
            case Kind::Affine: return std::nullopt;
            case Kind::Mobius:
                if (c * z + d == Point{}) return "argument at the pole";
                return std::nullopt;
            case Kind::Exp:
                if (!(z.imag() > lo && z.imag() < hi)) return "outside the source strip of Exp";
                return std::nullopt;
            case Kind::Log:
            case Kind::Power: {
                if (detail::distance_to_ray(z, cut_angle()) <= kCutMargin) return "on the branch cut";
                const double t = detail::arg_from(z, lo);
                if (!(t > lo && t < hi)) return "outside the source sector";
                return std::nullopt;
            }
            case Kind::SlitClose:
                if (!(z.imag() > 0.0)) return "outside the upper half-plane";
                if (detail::distance_to_segment(z, 0.0, kI) <= kCutMargin) return "on the slit (0, i]";
                return std::nullopt;
            case Kind::SlitOpen:
                if (!(z.imag() > 0.0)) return "outside the upper half-plane";
                return std::nullopt;
        }
        return "unknown step";
    }

    /// Evaluates the step without admissibility checks.
    Point apply(Point z) const {
        switch (kind) {
            case Kind::Affine: return a * z + b;
            case Kind::Mobius: return (a * z + b) / (c * z + d);
            case Kind::Exp: return std::exp(z);
            case Kind::Log: return {std::log(std::abs(z)), detail::arg_from(z, lo)};
            case Kind::Power: return std::exp(alpha * Point{std::log(std::abs(z)), detail::arg_from(z, lo)});
            case Kind::SlitClose: return detail::sqrt_upper(z * z + 1.0);
            case Kind::SlitOpen: return detail::sqrt_upper(z * z - 1.0);
        }
        return {};
    }

    Point derivative(Point z) const {
        switch (kind) {
            case Kind::Affine: return a;
            case Kind::Mobius: {
                const Point den = c * z + d;
                return (a * d - b * c) / (den * den);
            }
            case Kind::Exp: return std::exp(z);
            case Kind::Log: return 1.0 / z;
            case Kind::Power: return alpha * apply(z) / z;
            case Kind::SlitClose:
            case Kind::SlitOpen: return z / apply(z);
        }
        return {};
    }

    MapStep inverse() const {
        switch (kind) {
            case Kind::Affine: return affine(1.0 / a, -b / a);
            case Kind::Mobius: return mobius(d, -b, -c, a);
            case Kind::Exp: return log(lo, hi);
            case Kind::Log: return exp(lo, hi);
            case Kind::Power: return power(1.0 / alpha, alpha * lo, alpha * hi);
            case Kind::SlitClose: return slit_open();
            case Kind::SlitOpen: return slit_close();
        }
        return {};
    }

    std::string to_text() const {
        using detail::fmt17;
        auto cx = [](Point p) { return fmt17(p.real()) + " " + fmt17(p.imag()); };
        switch (kind) {
            case Kind::Affine: return "Affine " + cx(a) + " " + cx(b);
            case Kind::Mobius: return "Mobius " + cx(a) + " " + cx(b) + " " + cx(c) + " " + cx(d);
            case Kind::Exp: return "Exp " + fmt17(lo) + " " + fmt17(hi);
            case Kind::Log: return "Log " + fmt17(lo) + " " + fmt17(hi);
            case Kind::Power: return "Power " + fmt17(alpha) + " " + fmt17(lo) + " " + fmt17(hi);
            case Kind::SlitClose: return "SlitClose";
            case Kind::SlitOpen: return "SlitOpen";
        }
        return {};
    }

    static MapStep from_text(const std::string& line) {
        std::istringstream in(line);
        std::string kind;
        in >> kind;
        auto num = [&] {
            double x;
            if (!(in >> x)) throw DomainError("malformed step line: " + line);
            return x;
        };
        auto cx = [&] {
            const double re = num();
            return Point{re, num()};
        };
        if (kind == "Affine") {
            const Point a = cx();
            return affine(a, cx());
        }
        if (kind == "Mobius") {
            const Point a = cx(), b = cx(), c = cx();
            return mobius(a, b, c, cx());
        }
        if (kind == "Exp" || kind == "Log") {
            const double lo = num();
            const double hi = num();
            return kind == "Exp" ? exp(lo, hi) : log(lo, hi);
        }
        if (kind == "Power") {
            const double al = num(), lo = num();
            return power(al, lo, num());
        }
        if (kind == "SlitClose") return slit_close();
        if (kind == "SlitOpen") return slit_open();
        throw DomainError("unknown step kind: " + kind);
    }

private:
    static MapStep windowed(Kind k, double alpha, double lo, double hi) {
        if (!(hi > lo) || hi - lo > 2 * kPi + 1e-15) throw DomainError("branch window must satisfy 0 < hi - lo <= 2 pi");
        MapStep s;
        s.kind = k;
        s.alpha = alpha;
        s.lo = lo;
        s.hi = hi;
        return s;
    }
};

/// Ordered composition of steps from a source region onto a canonical domain.
class ConformalChain {
public:
    using Predicate = std::function<bool(Point)>;

    ConformalChain(std::vector<MapStep> steps, Predicate source, std::string source_description,
                   CanonicalDomain target)
        : steps_(std::move(steps)),
          source_(std::move(source)),
          source_description_(std::move(source_description)),
          target_(target) {}

    const std::vector<MapStep>& steps() const { return steps_; }
    CanonicalDomain target() const { return target_; }
    const std::string& source_description() const { return source_description_; }
    bool in_source(Point w) const { return source_(w); }

    /// Forward image; ChainError carries the failing step index.  Index
    /// steps().size() means the image left the target domain.
    Point eval(Point w) const {
        if (!source_(w)) throw ChainError(0, "point outside the source region " + source_description_);
        Point z = w;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            if (auto why = steps_[k].reject(z)) throw ChainError(k, *why);
            z = steps_[k].apply(z);
        }
        if (!contains(target_, z)) throw ChainError(steps_.size(), "image outside the target domain");
        return z;
    }

    Point eval_inverse(Point q) const {
        if (!contains(target_, q)) throw DomainError("eval_inverse: point outside the target domain");
        Point z = q;
        for (std::size_t k = steps_.size(); k-- > 0;) {
            const MapStep inv = steps_[k].inverse();
            if (auto why = inv.reject(z)) throw ChainError(k, "inverse: " + *why);
            z = inv.apply(z);
        }
        if (!source_(z)) throw DomainError("eval_inverse: no preimage in the source region");
        return z;
    }

    Point derivative(Point w) const {
        if (!source_(w)) throw ChainError(0, "point outside the source region " + source_description_);
        Point z = w;
        Point dz{1.0};
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            if (auto why = steps_[k].reject(z)) throw ChainError(k, *why);
            dz *= steps_[k].derivative(z);
            z = steps_[k].apply(z);
        }
        return dz;
    }

    /// One step per line.
    std::string to_text() const {
        std::string out;
        for (const auto& s : steps_) out += s.to_text() + "\n";
        return out;
    }

    static std::vector<MapStep> parse_steps(const std::string& text) {
        std::vector<MapStep> steps;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            steps.push_back(MapStep::from_text(line));
        }
        return steps;
    }

private:
    std::vector<MapStep> steps_;
    Predicate source_;
    std::string source_description_;
    CanonicalDomain target_;
};

/// Path along which a boundary point (or prime end) of the source is approached:
/// anchor + s * direction with s -> 0 for a finite point, and
/// anchor + direction / s with s -> 0 for the point at infinity.
struct Approach {
    Point anchor{};
    Point direction{1.0};
};

/// Limit of chain.eval along the approach path.  Divergence to infinity is
/// recognised when |f| exceeds 1e8 and keeps growing; otherwise the limit is
/// taken from the raw sequence or its first Richardson column once two
/// successive estimates agree within 1e-8.
inline BoundaryPoint push_boundary_point(const ConformalChain& chain, const BoundaryPoint& b,
                                         const Approach& approach) {
    // Steps of 2^(1/4) so that maps with exponential decay towards the limit are
    // sampled several times before rounding pushes the image onto the boundary.
    constexpr double ratio = 1.189207115002721;
    std::vector<Point> values;
    for (int k = 0; k <= 240; ++k) {
        const double s = std::pow(ratio, -k);
        const Point p = b.is_infinite() ? approach.anchor + approach.direction / s
                                        : b.value + s * approach.direction;
        Point f;
        try {
            f = chain.eval(p);
        } catch (const DomainError&) {
            break;
        }
        if (!is_finite(f)) break;
        values.push_back(f);
    }
    const std::size_t n = values.size();
    if (n < 4) throw EstimationError("push_boundary_point: too few admissible samples along the approach");

    const double m1 = std::abs(values[n - 1]), m2 = std::abs(values[n - 2]), m3 = std::abs(values[n - 3]);
    if (m1 > 1e8 && m1 > m2 && m2 > m3) return BoundaryPoint::at_infinity();

    constexpr double tol = 1e-8;
    for (std::size_t k = n - 1; k >= 2; --k) {
        const Point r1 = values[k] + (values[k] - values[k - 1]) / (ratio - 1.0);
        const Point r0 = values[k - 1] + (values[k - 1] - values[k - 2]) / (ratio - 1.0);
        if (std::abs(values[k] - values[k - 1]) <= tol) return BoundaryPoint::finite(values[k]);
        if (std::abs(r1 - r0) <= tol) return BoundaryPoint::finite(r1);
        if (k == 2) break;
    }
    throw EstimationError("push_boundary_point: limit did not stabilize");
}

}  // namespace petallab
