#pragma once

// Closed-form Koenigs models.  Each model fixes a Koenigs domain Omega, a chain
// Omega -> upper half-plane (the disk is reached through the Cayley map), the
// petals with their image regions in Omega, and a closed-form "chart" giving
// log N_e(q) for a canonical point q, where N_e is the half-plane automorphism
// sending the boundary point e to infinity.  The chart is what lets backward
// orbits be followed for |t| far beyond the range where q itself is a double.
//
//   strip-slit        Omega = {|Im w| < pi/2} minus (-inf, 0]; hyperbolic, mu = 1;
//                     petals {0 < Im w < pi/2} and {-pi/2 < Im w < 0}, lambda = -2.
//   sector-parabolic  Omega = {arg w in (-pi/2, pi)}; parabolic, mu = 0;
//                     one parabolic petal {Im w > 0}.
//   koebe-elliptic    Omega = C minus (-inf, -1], h(z) = 4z/(1-z)^2; elliptic, mu = 1;
//                     one petal C minus (-inf, 0], amplitude 2 pi, lambda = -1/2.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "petallab/confmap.hpp"
#include "petallab/hypcore.hpp"

namespace petallab {

/// A point of the Koenigs domain.  Elliptic orbits leave the range of double
/// (|w| = e^{|t|}), so such points may be stored by their logarithm.
struct OmegaPoint {
    Point value{};
    Point log_value{};
    bool logarithmic = false;

    static OmegaPoint direct(Point w) { return {w, {}, false}; }

    /// Stored directly whenever exp(log) is comfortably representable.
    static OmegaPoint from_log(Point L) {
        if (std::abs(L.real()) < 600.0) return direct(std::exp(L));
        return {{}, L, true};
    }

    std::optional<Point> direct_value() const {
        if (logarithmic) return std::nullopt;
        return value;
    }

    /// Principal logarithm of the point.
    Point log() const {
        if (!logarithmic) return std::log(value);
        return {log_value.real(), std::remainder(log_value.imag(), 2 * kPi)};
    }
};

enum class SemigroupKind { hyperbolic, parabolic, elliptic };
enum class PetalType { hyperbolic, parabolic };

inline std::string to_string(SemigroupKind k) {
    switch (k) {
        case SemigroupKind::hyperbolic: return "hyperbolic";
        case SemigroupKind::parabolic: return "parabolic";
        case SemigroupKind::elliptic: return "elliptic";
    }
    return "?";
}

/// Image of a petal under the Koenigs function.
struct PetalRegion {
    enum class Shape { Strip, HalfPlane, Sector };

    Shape shape = Shape::Strip;
    double lo = 0.0;  ///< Strip: lo < Im w < hi.  HalfPlane: Im w > lo.
    double hi = 0.0;
    Point mu{1.0};           ///< Sector Spir[mu, amplitude, theta0]
    double amplitude = 0.0;  ///< 2a
    double theta0 = 0.0;

    static PetalRegion strip(double lo, double hi) { return {Shape::Strip, lo, hi}; }
    static PetalRegion half_plane(double lo) { return {Shape::HalfPlane, lo, 0.0}; }
    static PetalRegion sector(Point mu, double amplitude, double theta0) {
        return {Shape::Sector, 0.0, 0.0, mu, amplitude, theta0};
    }

    /// Width of a strip region.
    double width() const { return hi - lo; }

    /// Sector only: the map onto {0 < Im z < amplitude}, or nullopt outside.
    /// It is e^{-i Arg mu}/cos(Arg mu) Log w + i(a - theta0) with the branch of
    /// Log selected by the sector.
    std::optional<Point> sector_to_strip(const OmegaPoint& w) const {
        const double phi = std::arg(mu);
        const double a = amplitude / 2;
        const Point s0 = w.log();
        const double t = s0.real() / mu.real();
        for (int k = -3; k <= 3; ++k) {
            const Point s = s0 + Point{0.0, 2 * kPi * k};
            const double theta = s.imag() - t * mu.imag();
            if (theta > theta0 - a && theta < theta0 + a)
                return std::polar(1.0, -phi) / std::cos(phi) * s + Point{0.0, a - theta0};
        }
        return std::nullopt;
    }

    bool contains(const OmegaPoint& w) const {
        switch (shape) {
            case Shape::Strip:
                if (w.logarithmic) return false;
                return w.value.imag() > lo && w.value.imag() < hi;
            case Shape::HalfPlane:
                if (w.logarithmic) return std::sin(w.log_value.imag()) > 0.0 && lo <= 0.0;
                return w.value.imag() > lo;
            case Shape::Sector: return sector_to_strip(w).has_value();
        }
        return false;
    }
    bool contains(Point w) const { return contains(OmegaPoint::direct(w)); }

    /// Hyperbolic distance of the region itself.
    double distance(const OmegaPoint& z, const OmegaPoint& w) const {
        if (!contains(z) || !contains(w)) throw DomainError("petal distance: point outside the petal image");
        switch (shape) {
            case Shape::Strip: return strip_distance(to_standard_strip(z.value, lo, hi), to_standard_strip(w.value, lo, hi));
            case Shape::HalfPlane: return uhp_distance(z.value - Point{0.0, lo}, w.value - Point{0.0, lo});
            case Shape::Sector:
                return strip_distance(to_standard_strip(*sector_to_strip(z), 0.0, amplitude),
                                      to_standard_strip(*sector_to_strip(w), 0.0, amplitude));
        }
        return 0.0;
    }
    double distance(Point z, Point w) const { return distance(OmegaPoint::direct(z), OmegaPoint::direct(w)); }

    PetalRegion inflated(double margin) const {
        PetalRegion r = *this;
        switch (shape) {
            case Shape::Strip:
                r.lo -= margin;
                r.hi += margin;
                break;
            case Shape::HalfPlane: r.lo -= margin; break;
            case Shape::Sector: r.amplitude += 2 * margin; break;
        }
        return r;
    }

private:
    static Point to_standard_strip(Point z, double lo, double hi) {
        return (kPi / (hi - lo)) * (z - Point{0.0, lo}) - Point{0.0, kPi / 2};
    }
};

struct Petal {
    std::string id;
    PetalType type = PetalType::hyperbolic;
    std::optional<double> lambda;  ///< repelling spectral value (hyperbolic petals)
    BoundaryPoint sigma_canonical;  ///< repelling point, or Denjoy-Wolff point for parabolic petals
    PetalRegion region;

    /// Endpoint of the geodesic used by the orthogonal/tangential speeds.
    const BoundaryPoint& endpoint() const { return sigma_canonical; }

    /// sigma in disk coordinates.
    Point sigma_disk() const {
        const auto b = cayley()(sigma_canonical);
        if (b.is_infinite()) throw DomainError("sigma maps to infinity");
        return b.value / std::abs(b.value);
    }
};

/// Half-plane automorphism sending the boundary point e to infinity:
/// identity for e = infinity, q -> -1/(q - x) for e = x real.
inline Mobius normalizer_to_infinity(const BoundaryPoint& e) {
    if (e.is_infinite()) return {};
    return {0.0, -1.0, 1.0, -e.value.real()};
}

namespace detail {

/// Wraps the imaginary part into [0, 2 pi).
inline Point wrap_upper(Point L) {
    double im = std::fmod(L.imag(), 2 * kPi);
    if (im < 0.0) im += 2 * kPi;
    return {L.real(), im};
}

// log(1 + z) keeping accuracy for small |z|.
inline Point log1p(Point z) {
    if (std::abs(z) < 1e-4) return z - z * z / 2.0 + z * z * z / 3.0;
    return std::log(1.0 + z);
}

}  // namespace detail

class KoenigsModel {
public:
    using Chart = std::function<UhpLog(const OmegaPoint&, const BoundaryPoint&)>;

    std::string name;
    SemigroupKind kind = SemigroupKind::hyperbolic;
    Point mu{1.0};
    ConformalChain chain;
    std::vector<Petal> petals;
    std::optional<BoundaryPoint> dw_point;  ///< canonical image of tau (non-elliptic)
    std::optional<Point> dw_interior;       ///< canonical image of tau (elliptic)
    std::vector<Point> default_bases;       ///< one per petal, Omega coordinates

    KoenigsModel(std::string name, SemigroupKind kind, Point mu, ConformalChain chain,
                 std::function<bool(const OmegaPoint&)> member, std::function<double(Point)> delta, Chart chart)
        : name(std::move(name)),
          kind(kind),
          mu(mu),
          chain(std::move(chain)),
          member_(std::move(member)),
          delta_(std::move(delta)),
          chart_(std::move(chart)) {}

    bool is_elliptic() const { return kind == SemigroupKind::elliptic; }

    bool membership(const OmegaPoint& w) const { return member_(w); }
    bool membership(Point w) const { return is_finite(w) && member_(OmegaPoint::direct(w)); }

    /// Euclidean distance from w to the boundary of Omega.
    double boundary_distance(Point w) const {
        if (!membership(w)) throw DomainError("boundary_distance: point outside Omega");
        return delta_(w);
    }

    std::optional<std::size_t> petal_index_of(const OmegaPoint& w) const {
        if (!membership(w)) return std::nullopt;
        for (std::size_t k = 0; k < petals.size(); ++k)
            if (petals[k].region.contains(w)) return k;
        return std::nullopt;
    }

    const Petal* petal_of(Point w) const {
        const auto k = petal_index_of(OmegaPoint::direct(w));
        return k ? &petals[*k] : nullptr;
    }

    const Petal& petal(std::size_t k) const {
        if (k >= petals.size()) throw DomainError("petal index out of range for model " + name);
        return petals[k];
    }

    /// log N_e(chain(w)) from the model's closed form; valid for all of Omega.
    UhpLog normalized_log(const OmegaPoint& w, const BoundaryPoint& e) const {
        if (!membership(w)) throw DomainError("normalized_log: point outside Omega");
        return chart_(w, e);
    }

    /// Same quantity through the generic chain and a Moebius map; limited to
    /// points whose canonical image is an ordinary double.
    UhpLog normalized_log_via_chain(Point w, const BoundaryPoint& e) const {
        const Point q = chain.eval(w);
        return {std::log(normalizer_to_infinity(e)(q))};
    }

    /// Canonical point q from a chart value for endpoint e.
    static Point canonical_from_log(const UhpLog& L, const BoundaryPoint& e) {
        return normalizer_to_infinity(e).inverse()(std::exp(L.log));
    }

private:
    std::function<bool(const OmegaPoint&)> member_;
    std::function<double(Point)> delta_;
    Chart chart_;
};

namespace models {

inline KoenigsModel strip_slit() {
    auto member_pt = [](Point w) {
        if (!(std::abs(w.imag()) < kPi / 2)) return false;
        return !(w.imag() == 0.0 && w.real() <= 0.0);
    };
    auto member = [member_pt](const OmegaPoint& w) { return !w.logarithmic && member_pt(w.value); };
    auto delta = [](Point w) {
        const double walls = kPi / 2 - std::abs(w.imag());
        const double slit = w.real() <= 0.0 ? std::abs(w.imag()) : std::abs(w);
        return std::min(walls, slit);
    };

    // q = sqrt(1 - e^{2w}) on the upper half-plane branch.  For Re w > 0 it is
    // i e^w sqrt(1 - e^{-2w}); for Re w <= 0 it is s sqrt(1 - u), u = e^{2w},
    // with s = -sign(Im w).  Since q^2 - x^2 = -u for x = +-1, the factor
    // q - s is rewritten as -s u / (1 + sqrt(1 - u)) and u never has to be
    // formed when it would underflow.
    auto chart = [](const OmegaPoint& wp, const BoundaryPoint& e) -> UhpLog {
        const Point w = wp.value;
        std::optional<double> x;
        if (!e.is_infinite()) {
            x = e.value.real();
            if (std::abs(std::abs(*x) - 1.0) > 1e-12)
                throw DomainError("strip-slit chart: endpoint must be infinity or +-1");
            x = *x > 0.0 ? 1.0 : -1.0;
        }
        if (w.real() > 0.0) {
            const Point log_q = Point{0.0, kPi / 2} + w + 0.5 * detail::log1p(-std::exp(-2.0 * w));
            if (!x) return {log_q};
            // N_x(q) = -1/(q - x) = (q + x)/u
            const Point log_q_plus_x = log_q + detail::log1p(*x * std::exp(-log_q));
            return {detail::wrap_upper(log_q_plus_x - 2.0 * w)};
        }
        const double s = w.imag() > 0.0 ? -1.0 : 1.0;
        const Point u = std::exp(2.0 * w);
        const Point root = std::sqrt(1.0 - u);
        if (!x) return {detail::wrap_upper(std::log(s * root))};
        if (*x == s) {
            // q - x = -s u/(1 + root), so N = s (1 + root)/u
            return {detail::wrap_upper(std::log(s * (1.0 + root)) - 2.0 * w)};
        }
        // q - x = s (root + 1)
        return {detail::wrap_upper(std::log(-s / (1.0 + root)))};
    };

    ConformalChain chain({MapStep::exp(-kPi / 2, kPi / 2), MapStep::mobius(kI, 0.0, 0.0, 1.0), MapStep::slit_close()},
                         member_pt, "{|Im w| < pi/2} minus (-inf, 0]", CanonicalDomain::UpperHalfPlane);

    KoenigsModel m("strip-slit", SemigroupKind::hyperbolic, 1.0, std::move(chain), member, delta, chart);
    // The upper side of the slit base closes to -1, the lower side to +1.
    m.petals.push_back({"upper", PetalType::hyperbolic, -2.0, BoundaryPoint::finite(-1.0),
                        PetalRegion::strip(0.0, kPi / 2)});
    m.petals.push_back({"lower", PetalType::hyperbolic, -2.0, BoundaryPoint::finite(1.0),
                        PetalRegion::strip(-kPi / 2, 0.0)});
    m.dw_point = BoundaryPoint::at_infinity();
    m.default_bases = {Point{1.0, kPi / 4}, Point{1.0, -kPi / 4}};
    return m;
}

inline KoenigsModel sector_parabolic() {
    auto member_pt = [](Point w) { return is_finite(w) && !(w.real() <= 0.0 && w.imag() <= 0.0); };
    auto member = [member_pt](const OmegaPoint& w) { return !w.logarithmic && member_pt(w.value); };
    auto delta = [](Point w) {
        const double neg_real = w.real() <= 0.0 ? std::abs(w.imag()) : std::abs(w);
        const double neg_imag = w.imag() <= 0.0 ? std::abs(w.real()) : std::abs(w);
        return std::min(neg_real, neg_imag);
    };
    // q = (i w)^{2/3}, arg(i w) in (0, 3 pi/2)
    auto chart = [](const OmegaPoint& wp, const BoundaryPoint& e) -> UhpLog {
        if (!e.is_infinite()) throw DomainError("sector-parabolic chart: only the endpoint at infinity is charted");
        return {(2.0 / 3.0) * (std::log(wp.value) + Point{0.0, kPi / 2})};
    };

    ConformalChain chain({MapStep::mobius(kI, 0.0, 0.0, 1.0), MapStep::power(2.0 / 3.0, 0.0, 1.5 * kPi)}, member_pt,
                         "{arg w in (-pi/2, pi)}", CanonicalDomain::UpperHalfPlane);

    KoenigsModel m("sector-parabolic", SemigroupKind::parabolic, 0.0, std::move(chain), member, delta, chart);
    m.petals.push_back({"upper", PetalType::parabolic, std::nullopt, BoundaryPoint::at_infinity(),
                        PetalRegion::half_plane(0.0)});
    m.dw_point = BoundaryPoint::at_infinity();
    m.default_bases = {Point{0.0, std::numbers::e}};
    return m;
}

inline KoenigsModel koebe_elliptic() {
    auto member = [](const OmegaPoint& w) {
        if (w.logarithmic) {
            const double s = std::sin(w.log_value.imag());
            const double c = std::cos(w.log_value.imag());
            // |w| is astronomically large or small; only the ray direction matters.
            return !(std::abs(s) < 1e-300 && c < 0.0 && w.log_value.real() > 0.0);
        }
        return is_finite(w.value) && !(w.value.imag() == 0.0 && w.value.real() <= -1.0);
    };
    auto member_pt = [member](Point w) { return member(OmegaPoint::direct(w)); };
    auto delta = [](Point w) { return w.real() <= -1.0 ? std::abs(w.imag()) : std::abs(w + 1.0); };
    // q = i sqrt(w + 1), principal root
    auto chart = [](const OmegaPoint& wp, const BoundaryPoint& e) -> UhpLog {
        if (!e.is_infinite()) throw DomainError("koebe-elliptic chart: only the endpoint at infinity is charted");
        Point log_w1;
        if (wp.logarithmic && wp.log_value.real() > 0.0) {
            const Point L = wp.log();
            log_w1 = L + detail::log1p(std::exp(-L));
        } else {
            const Point w = wp.logarithmic ? std::exp(wp.log_value) : wp.value;
            log_w1 = std::log(1.0 + w);
        }
        return {Point{0.0, kPi / 2} + 0.5 * log_w1};
    };

    ConformalChain chain({MapStep::affine(1.0, 1.0), MapStep::power(0.5, -kPi, kPi), MapStep::affine(kI, 0.0)},
                         member_pt, "C minus (-inf, -1]", CanonicalDomain::UpperHalfPlane);

    KoenigsModel m("koebe-elliptic", SemigroupKind::elliptic, 1.0, std::move(chain), member, delta, chart);
    // amplitude 2a = 2 pi; lambda = -|mu|^2 pi / (2a Re mu)
    m.petals.push_back({"sector", PetalType::hyperbolic, -0.5, BoundaryPoint::at_infinity(),
                        PetalRegion::sector(1.0, 2 * kPi, 0.0)});
    m.dw_interior = kI;
    m.default_bases = {Point{1.0, 0.0}};
    return m;
}

}  // namespace models

inline std::vector<KoenigsModel> catalog() {
    return {models::strip_slit(), models::sector_parabolic(), models::koebe_elliptic()};
}

inline KoenigsModel find_model(const std::string& name) {
    for (auto& m : catalog())
        if (m.name == name) return m;
    throw DomainError("unknown model '" + name + "' (expected strip-slit, sector-parabolic or koebe-elliptic)");
}

/// Repelling spectral value from a hyperbolic petal's strip width, -pi/width.
inline double lambda_from_strip_width(double width) { return -kPi / width; }

/// Repelling spectral value from a spirallike sector: 2a = -|mu|^2 pi / (lambda Re mu).
inline double lambda_from_amplitude(Point mu, double amplitude) {
    return -std::norm(mu) * kPi / (amplitude * mu.real());
}

}  // namespace petallab
