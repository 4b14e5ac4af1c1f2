#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "petallab/errors.hpp"
#include "petallab/hypcore.hpp"
#include "petallab/models.hpp"
#include "petallab/numerics.hpp"

namespace petallab {

/// Canonical half-plane point -> disk point.
inline Point canonical_to_disk(Point q) { return cayley()(q); }
inline Point disk_to_canonical(Point z) { return cayley().inverse()(z); }

/// Disk image of an Omega point, i.e. h^{-1}(w).
inline Point omega_to_disk(const KoenigsModel& m, Point w) { return canonical_to_disk(m.chain.eval(w)); }

/// Koenigs function h(z) = chain^{-1}(C^{-1}(z)).
inline Point koenigs(const KoenigsModel& m, Point z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("koenigs: point outside the unit disk");
    return m.chain.eval_inverse(disk_to_canonical(z));
}

/// Smallest admissible 1 - |z| before disk coordinates are declared unavailable.
inline constexpr double kDiskFloor = 1e-250;

struct OrbitPoint {
    double t = 0.0;
    OmegaPoint omega;
    std::optional<Point> canonical_q;
    std::optional<Point> disk_z;
};

/// Canonical and disk coordinates of an Omega point, when representable.
inline void fill_coordinates(const KoenigsModel& m, OrbitPoint& p) {
    const UhpLog L = m.normalized_log(p.omega, BoundaryPoint::at_infinity());
    const Point q = std::exp(L.log);
    if (!is_finite(q) || !(q.imag() > 0.0)) return;
    p.canonical_q = q;
    // 1 - |z|^2 = 4 Im q / |q + i|^2 and 1 - |z| is about half of it
    const double gap = 4.0 * q.imag() / std::norm(q + kI);
    if (gap / 2 > kDiskFloor) p.disk_z = canonical_to_disk(q);
}

/// phi_t in Omega coordinates; negative t requires a point of some petal.
inline OrbitPoint flow(const KoenigsModel& m, const OmegaPoint& z0, double t) {
    if (!m.membership(z0)) throw DomainError("flow: starting point outside Omega");
    if (t < 0.0 && !m.petal_index_of(z0)) throw PetalRequiredError("flow: backward flow needs a starting point inside a petal");
    OrbitPoint p;
    p.t = t;
    if (t == 0.0) {
        p.omega = z0;
    } else if (!m.is_elliptic()) {
        p.omega = OmegaPoint::direct(z0.value + t);
    } else if (!z0.logarithmic && std::abs(m.mu * t) < 600.0) {
        p.omega = OmegaPoint::direct(std::exp(-m.mu * t) * z0.value);
    } else {
        const Point L = z0.logarithmic ? z0.log_value : std::log(z0.value);
        p.omega = OmegaPoint::from_log(L - m.mu * t);
    }
    fill_coordinates(m, p);
    return p;
}

inline OrbitPoint flow(const KoenigsModel& m, Point z0, double t) { return flow(m, OmegaPoint::direct(z0), t); }

/// Infinitesimal generator at a disk point: 1/h'(z), or -mu h(z)/h'(z) for
/// elliptic models, with h' taken from the chain derivative.
inline Point generator(const KoenigsModel& m, Point z) {
    const Point q = disk_to_canonical(z);
    const Point w = m.chain.eval_inverse(q);
    const Point d = cayley().derivative(q) * m.chain.derivative(w);
    return m.is_elliptic() ? -m.mu * w * d : d;
}

/// Random Omega points inside petal k, kept away from the petal edges.
inline std::vector<Point> sample_petal(const KoenigsModel& m, std::size_t k, std::size_t n, std::uint64_t seed) {
    const Petal& P = m.petal(k);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    std::vector<Point> out;
    out.reserve(n);
    const auto& R = P.region;
    while (out.size() < n) {
        Point w;
        switch (R.shape) {
            case PetalRegion::Shape::Strip: w = {re(rng), R.lo + unit(rng) * R.width()}; break;
            case PetalRegion::Shape::HalfPlane: w = {re(rng), R.lo + 5.0 * unit(rng)}; break;
            case PetalRegion::Shape::Sector: {
                const double a = R.amplitude / 2;
                const double s = re(rng) * 0.7;
                const double theta = R.theta0 - a + 2 * a * unit(rng);
                w = std::exp(s * R.mu + Point{0.0, theta});
                break;
            }
        }
        if (m.membership(w) && R.contains(w)) out.push_back(w);
    }
    return out;
}

struct RepellingReport {
    Point sigma;
    double lambda = 0.0;
    double min_inequality_residual = 0.0;  ///< (i): must be >= 0 up to rounding
    std::vector<int> ks;
    std::vector<Point> ratios;  ///< G(z_k)/(z_k - sigma), z_k = sigma (1 - 2^-k)
    Point ratio_limit;          ///< (ii): should equal -lambda
    double min_re_p = 0.0;      ///< (iii): must be >= 0 up to rounding
    double normalization_residual = 0.0;  ///< |(z_k - sigma) p(z_k)| at the last k, soft check

    double limit_error() const { return std::abs(ratio_limit + lambda); }
};

/// Generator checks at a repelling fixed point.  The radial sequence stops at
/// k = 26: beyond that the inverse chain loses digits near sigma faster than
/// the sequence converges.
inline RepellingReport repelling_diagnostics(const KoenigsModel& m, const Petal& petal, std::span<const Point> disk_samples,
                                             int kmin = 4, int kmax = 26) {
    if (petal.type != PetalType::hyperbolic || !petal.lambda)
        throw DomainError("repelling_diagnostics: petal has no repelling fixed point");
    RepellingReport r;
    r.sigma = petal.sigma_disk();
    r.lambda = *petal.lambda;
    const Point s = r.sigma;
    const double lam = r.lambda;

    auto p_of = [&](Point z, Point G) {
        return G / ((std::conj(s) * z - 1.0) * (z - s)) - (lam / 2) * (s + z) / (s - z);
    };

    r.min_inequality_residual = INFINITY;
    r.min_re_p = INFINITY;
    for (const Point z : disk_samples) {
        const Point G = generator(m, z);
        const double lhs = (s * G / ((s - z) * (s - z))).real();
        const double rhs = (lam / 2) * disk_gap(z) / std::norm(s - z);
        r.min_inequality_residual = std::min(r.min_inequality_residual, lhs - rhs);
        r.min_re_p = std::min(r.min_re_p, p_of(z, G).real());
    }

    for (int k = kmin; k <= kmax; ++k) {
        const Point z = s * (1.0 - std::ldexp(1.0, -k));
        const Point G = generator(m, z);
        r.ks.push_back(k);
        r.ratios.push_back(G / (z - s));
        if (k == kmax) r.normalization_residual = std::abs((z - s) * p_of(z, G));
    }
    const std::size_t tail = std::min<std::size_t>(r.ratios.size(), 6);
    r.ratio_limit = numerics::richardson<Point>(std::span<const Point>(r.ratios).last(tail), 3);
    return r;
}

/// d(phi_t(z0), phi_{t-1}(z0)) for each t, measured in canonical coordinates.
inline std::vector<double> regularity_gap(const KoenigsModel& m, const Petal& petal, Point z0, std::span<const double> t_grid) {
    if (!petal.region.contains(z0)) throw PetalRequiredError("regularity_gap: base point outside the petal");
    const BoundaryPoint& e = petal.endpoint();
    std::vector<double> gaps;
    gaps.reserve(t_grid.size());
    for (const double t : t_grid) {
        const auto a = flow(m, z0, t);
        const auto b = flow(m, z0, t - 1.0);
        gaps.push_back(uhp_distance(m.normalized_log(a.omega, e), m.normalized_log(b.omega, e)));
    }
    return gaps;
}

}  // namespace petallab
