#pragma once

// The verification suite: one pass/fail line per criterion.  Used by the
// `verify` subcommand and by the standalone acceptance binary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "petallab/bounds.hpp"
#include "petallab/hmeasure.hpp"
#include "petallab/hypcore.hpp"
#include "petallab/models.hpp"
#include "petallab/semigroup.hpp"
#include "petallab/speeds.hpp"

namespace petallab::acceptance {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
};

namespace detail {

// Collects failed checks and a short summary of the measured values.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) {
        if (!notes_.empty()) notes_ += "; ";
        notes_ += s;
    }
    CriterionResult finish(int id, std::string title) const {
        CriterionResult r{id, std::move(title), failures_.empty(), notes_};
        if (!failures_.empty()) {
            r.detail += r.detail.empty() ? "" : " | ";
            r.detail += "FAILED: " + failures_.front();
            if (failures_.size() > 1) r.detail += " (+" + std::to_string(failures_.size() - 1) + " more)";
        }
        return r;
    }

private:
    std::vector<std::string> failures_;
    std::string notes_;
};

inline std::string num(double x, int prec = 6) {
    std::ostringstream o;
    o.precision(prec);
    o << x;
    return o.str();
}

inline bool within_rel(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

struct Catalog {
    KoenigsModel m1 = models::strip_slit();
    KoenigsModel m2 = models::sector_parabolic();
    KoenigsModel m3 = models::koebe_elliptic();
};

// Series on the t = -2^k grid, k = 4..16, from the default base of petal k.
inline SpeedSeries default_series(const KoenigsModel& m, std::size_t k, int kmin = 4, int kmax = 16) {
    const auto g = dyadic_grid(kmin, kmax);
    return speed_series(m, m.petal(k), m.default_bases[k], g);
}

}  // namespace detail

inline CriterionResult hyperbolic_total_speed(const detail::Catalog& c) {
    detail::Checker ck;
    const double s1 = slope_estimate(detail::default_series(c.m1, 0), SlopeMode::linear_in_t).slope;
    const double s3 = slope_estimate(detail::default_series(c.m3, 0), SlopeMode::linear_in_t).slope;
    ck.note("strip-slit upper slope " + detail::num(s1) + " (target -1)");
    ck.note("koebe-elliptic slope " + detail::num(s3) + " (target -0.25)");
    ck.expect(detail::within_rel(s1, -1.0, 0.1), "strip-slit slope outside 10% of -1");
    ck.expect(detail::within_rel(s3, -0.25, 0.1), "koebe-elliptic slope outside 10% of -0.25");
    return ck.finish(1, "hyperbolic petal total speed slope = lambda/2");
}

inline CriterionResult parabolic_log_bounds(const detail::Catalog& c) {
    detail::Checker ck;
    const Petal& P = c.m2.petal(0);
    const Point z = c.m2.default_bases[0];
    for (const double t : {-1e3, -1e4, -1e6}) {
        const double r = total_speed(c.m2, P, z, t) / std::log(-t);
        ck.note("v/log|t| at " + detail::num(t) + " = " + detail::num(r));
        ck.expect(r >= 0.24 && r <= 1.01, "v/log|t| at t = " + detail::num(t) + " outside [0.24, 1.01]");
    }
    const double T = std::ldexp(1.0, 16);
    const double ratio = total_speed(c.m2, P, z, -T) / T;
    ck.note("v(-2^16)/2^16 = " + detail::num(ratio));
    ck.expect(ratio <= 1e-3, "v(-2^16)/2^16 > 1e-3");
    return ck.finish(2, "parabolic petal log bounds and v/t -> 0");
}

inline CriterionResult tangential_dichotomy(const detail::Catalog& c) {
    detail::Checker ck;
    const double T10 = -std::ldexp(1.0, 10), T16 = -std::ldexp(1.0, 16);
    auto bounded = [&](const KoenigsModel& m, std::size_t k, Point z) {
        const Petal& P = m.petal(k);
        const double a = tangential_speed(m, P, z, T10);
        const double b = tangential_speed(m, P, z, T16);
        const std::string tag = m.name + "/" + P.id + " at " + detail::num(z.real(), 3) + (z.imag() < 0 ? "" : "+") +
                                detail::num(z.imag(), 3) + "i";
        ck.note(tag + " vT " + detail::num(a) + " -> " + detail::num(b));
        ck.expect(std::abs(b - a) <= 0.05, tag + ": tangential speed not settled");
        ck.expect(b / -T16 <= 1e-3, tag + ": vT/|t| > 1e-3");
    };
    // default bases sit on the symmetry line of the petal, where the orbit
    // hugs eta; the off-centre bases give a nonzero plateau
    for (std::size_t k = 0; k < c.m1.petals.size(); ++k) bounded(c.m1, k, c.m1.default_bases[k]);
    bounded(c.m1, 0, Point{1.0, 0.3});
    bounded(c.m1, 1, Point{-2.0, -1.2});
    bounded(c.m3, 0, c.m3.default_bases[0]);
    bounded(c.m3, 0, std::polar(2.0, 2.5));
    const Petal& P = c.m2.petal(0);
    const double a = tangential_speed(c.m2, P, c.m2.default_bases[0], T10);
    const double b = tangential_speed(c.m2, P, c.m2.default_bases[0], T16);
    ck.note("sector-parabolic vT " + detail::num(a) + " -> " + detail::num(b));
    ck.expect(b >= a + 1.0, "sector-parabolic tangential speed does not grow by 1");
    return ck.finish(3, "tangential speed bounded (hyperbolic) / divergent (parabolic)");
}

inline CriterionResult orthogonal_speed_slopes(const detail::Catalog& c) {
    detail::Checker ck;
    const auto col = SpeedColumn::orthogonal;
    const double s1 = slope_estimate(detail::default_series(c.m1, 0), SlopeMode::linear_in_t, col).slope;
    const double s3 = slope_estimate(detail::default_series(c.m3, 0), SlopeMode::linear_in_t, col).slope;
    const double s2 = slope_estimate(detail::default_series(c.m2, 0), SlopeMode::linear_in_t, col).slope;
    ck.note("strip-slit " + detail::num(s1) + ", koebe-elliptic " + detail::num(s3) + ", sector-parabolic " +
            detail::num(s2));
    ck.expect(detail::within_rel(s1, -1.0, 0.1), "strip-slit orthogonal slope outside 10% of -1");
    ck.expect(detail::within_rel(s3, -0.25, 0.1), "koebe-elliptic orthogonal slope outside 10% of -0.25");
    ck.expect(std::abs(s2) <= 1e-3, "sector-parabolic orthogonal slope above 1e-3");
    return ck.finish(4, "orthogonal speed slope = lambda/2 (0 for parabolic)");
}

namespace detail {

inline bool pythagoras_ok(const SpeedSample& s) {
    const double lo = s.v_o + s.v_T - 0.5 * std::log(2.0) - 1e-9;
    const double hi = s.v_o + s.v_T + 1e-9;
    return s.v >= lo && s.v <= hi;
}

}  // namespace detail

inline CriterionResult pythagoras(const detail::Catalog& c, std::uint64_t seed) {
    detail::Checker ck;
    std::size_t n = 0, bad = 0;
    const auto grid = dyadic_grid(0, 16);
    for (const KoenigsModel* m : {&c.m1, &c.m2, &c.m3}) {
        for (std::size_t k = 0; k < m->petals.size(); ++k) {
            std::vector<Point> bases = sample_petal(*m, k, 10, seed + k);
            bases.push_back(m->default_bases[k]);
            for (const Point z : bases) {
                for (const auto& s : speed_series(*m, m->petal(k), z, grid).samples) {
                    ++n;
                    if (!detail::pythagoras_ok(s)) {
                        ++bad;
                        ck.expect(false, m->name + " t=" + detail::num(s.t) + " v=" + detail::num(s.v, 17) +
                                             " vo+vT=" + detail::num(s.v_o + s.v_T, 17));
                    }
                }
            }
        }
    }
    ck.note(std::to_string(n) + " samples, " + std::to_string(bad) + " outside the sandwich");
    return ck.finish(5, "Pythagoras sandwich on every sample");
}

inline CriterionResult base_point_independence(const detail::Catalog& c, std::uint64_t seed) {
    detail::Checker ck;
    std::vector<double> grid{0.0};
    for (double t : dyadic_grid(0, 16)) grid.push_back(t);
    std::size_t pairs = 0;
    double worst = -INFINITY;  // max of |difference| - 2 d_petal
    std::uint64_t stream = 0;
    for (const KoenigsModel* m : {&c.m1, &c.m2, &c.m3}) {
        for (std::size_t k = 0; k < m->petals.size(); ++k) {
            const Petal& P = m->petal(k);
            const auto pts = sample_petal(*m, k, 40, seed + 101 * ++stream);
            for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
                const Point z = pts[i], w = pts[i + 1];
                const double bound = 2.0 * P.region.distance(z, w) + 1e-9;
                ++pairs;
                for (const double t : grid) {
                    const SpeedSample a = petal_speeds(*m, P, z, t);
                    const SpeedSample b = petal_speeds(*m, P, w, t, z);  // same geodesic, through z
                    const double d = std::max({std::abs(a.v - b.v), std::abs(a.v_o - b.v_o), std::abs(a.v_T - b.v_T)});
                    worst = std::max(worst, d - bound);
                    if (d > bound)
                        ck.expect(false, m->name + "/" + P.id + " t=" + detail::num(t) + " diff " + detail::num(d) +
                                             " > " + detail::num(bound));
                }
            }
        }
    }
    ck.note(std::to_string(pairs) + " pairs, max(diff - 2 d_petal) = " + detail::num(worst));
    return ck.finish(6, "base-point independence of the three speeds");
}

inline CriterionResult forward_baseline(const detail::Catalog& c) {
    detail::Checker ck;
    const auto grid = dyadic_grid(4, 16, +1.0);
    std::vector<double> x, y;
    const Point z1 = koenigs(c.m1, 0.0);
    for (std::size_t i = grid.size() / 2; i < grid.size(); ++i) {
        x.push_back(grid[i]);
        y.push_back(forward_speed(c.m1, z1, grid[i]));
    }
    const double slope = numerics::least_squares(x, y).slope;
    const double T = std::ldexp(1.0, 16);
    const double r2 = forward_speed(c.m2, koenigs(c.m2, 0.0), T) / T;
    ck.note("strip-slit forward slope " + detail::num(slope) + "; sector-parabolic v(2^16)/2^16 = " + detail::num(r2));
    ck.expect(detail::within_rel(slope, 0.5, 0.1), "strip-slit forward slope outside 10% of 0.5");
    ck.expect(r2 <= 1e-3, "sector-parabolic forward v/t above 1e-3");
    return ck.finish(7, "forward speed slope = mu/2");
}

inline CriterionResult generator_diagnostics(const detail::Catalog& c, std::uint64_t seed) {
    detail::Checker ck;
    for (const KoenigsModel* m : {&c.m1, &c.m3}) {
        for (std::size_t k = 0; k < m->petals.size(); ++k) {
            const Petal& P = m->petal(k);
            std::vector<Point> disk;
            for (const Point w : sample_petal(*m, k, 1000, seed + 17 * k)) disk.push_back(omega_to_disk(*m, w));
            const RepellingReport r = repelling_diagnostics(*m, P, disk);
            const std::string tag = m->name + "/" + P.id;
            ck.note(tag + " (i) " + detail::num(r.min_inequality_residual, 3) + ", limit " +
                    detail::num(r.ratio_limit.real(), 10) + ", (iii) " + detail::num(r.min_re_p, 3));
            ck.expect(r.min_inequality_residual >= -1e-9, tag + ": inequality (i) violated");
            ck.expect(r.limit_error() <= 1e-3, tag + ": angular limit differs from -lambda");
            ck.expect(r.min_re_p >= -1e-9, tag + ": Re p < 0");
        }
    }
    // closed form for the Koebe model: G(z)/(z - 1) = z/(1 + z)
    double worst = 0.0;
    for (int k = 4; k <= 26; ++k) {
        const double z = 1.0 - std::ldexp(1.0, -k);
        const Point G = generator(c.m3, z);
        worst = std::max(worst, std::abs(G / (z - 1.0) - z / (1.0 + z)));
    }
    ck.note("koebe-elliptic closed-form mismatch " + detail::num(worst, 3));
    ck.expect(worst <= 1e-9, "koebe-elliptic generator differs from -z(1-z)/(1+z)");
    return ck.finish(8, "generator diagnostics at repelling points");
}

inline CriterionResult bound_arithmetic() {
    detail::Checker ck;
    const auto lr = BoundaryProfile::logrecip();
    const double u3 = upper_bound(lr, -1e3) / 1e6;
    std::vector<double> grid;
    for (int k = 2; k <= 6; ++k) grid.push_back(-std::pow(10.0, k));
    const auto series = bound_ratio_series(lr, grid, BoundKind::upper);
    const double g3 = lower_bound(BoundaryProfile::gaussian(), -1e3) / 1e6;
    ck.note("logrecip upper/t^2 at -1e3 = " + detail::num(u3) + " (" + to_string(series.trend) + ")");
    ck.note("gaussian lower/t^2 at -1e3 = " + detail::num(g3, 8));
    ck.expect(u3 <= 0.02, "logrecip upper ratio above 0.02");
    ck.expect(series.trend == Trend::decreasing, "logrecip ratios not decreasing");
    ck.expect(g3 >= 0.249 && g3 <= 0.2501, "gaussian lower ratio outside [0.249, 0.2501]");
    return ck.finish(9, "non-regular orbit bound arithmetic");
}

inline CriterionResult harmonic_measure_angles(const detail::Catalog& c) {
    detail::Checker ck;
    const Point a{1.0, 0.0};
    std::vector<Point> radial;
    for (int j = 1; j <= 20; ++j) radial.push_back((1.0 - std::ldexp(1.0, -j)) * a);
    const auto rr = approach_angle(radial, a, Arc::starting_at(a, kPi / 2));
    ck.note("radial angle/pi = " + detail::num(rr.theta / kPi));
    ck.expect(!rr.inconclusive && std::abs(rr.theta - kPi / 2) <= 1e-2, "radial approach angle is not pi/2");

    const Petal& P = c.m1.petal(0);
    const Point sigma = P.sigma_disk();
    std::vector<Point> orbit;
    for (int k = 1; k <= 200; ++k) {
        const auto p = flow(c.m1, c.m1.default_bases[0], -k);
        if (p.disk_z) orbit.push_back(*p.disk_z);
    }
    const auto ro = approach_angle(orbit, sigma, Arc::starting_at(sigma, kPi / 2));
    ck.note("strip-slit backward orbit angle/pi = " + detail::num(ro.theta / kPi));
    ck.expect(!ro.inconclusive && ro.theta > 0.05 * kPi && ro.theta < 0.95 * kPi,
              "backward orbit does not converge non-tangentially");
    return ck.finish(10, "harmonic-measure angle of approach");
}

inline CriterionResult infrastructure(const detail::Catalog& c, std::uint64_t seed) {
    detail::Checker ck;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 3.0), u01(0.0, 1.0), ut(-3.0, 3.0);

    double round_trip = 0.0;
    for (const KoenigsModel* m : {&c.m1, &c.m2, &c.m3}) {
        for (int i = 0; i < 1000; ++i) {
            const Point q{ux(rng), uy(rng)};
            const Point back = m->chain.eval(m->chain.eval_inverse(q));
            round_trip = std::max(round_trip, std::abs(back - q) / std::max(1.0, std::abs(q)));
        }
    }
    ck.note("chain round trip " + detail::num(round_trip, 3));
    ck.expect(round_trip <= 1e-10, "chain round trip above 1e-10");

    double law = 0.0;
    for (const KoenigsModel* m : {&c.m1, &c.m2, &c.m3}) {
        for (std::size_t k = 0; k < m->petals.size(); ++k) {
            for (const Point z : sample_petal(*m, k, 100, seed + 31 * k)) {
                const double s = ut(rng), t = ut(rng);
                const auto once = flow(*m, z, s + t);
                const auto twice = flow(*m, flow(*m, z, s).omega, t);
                if (once.disk_z && twice.disk_z) law = std::max(law, std::abs(*once.disk_z - *twice.disk_z));
            }
        }
    }
    ck.note("semigroup law " + detail::num(law, 3));
    ck.expect(law <= 1e-9, "semigroup law residual above 1e-9");

    double metric = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Point z = std::polar(std::sqrt(u01(rng)) * 0.999, 2 * kPi * u01(rng));
        const Point w = std::polar(std::sqrt(u01(rng)) * 0.999, 2 * kPi * u01(rng));
        const Mobius inv = cayley().inverse();
        const double dd = disk_distance(z, w);
        metric = std::max(metric, std::abs(dd - uhp_distance(inv(z), inv(w))) / std::max(1.0, dd));
        const Point a{ux(rng), (u01(rng) - 0.5) * 0.999 * kPi};
        const Point b{ux(rng), (u01(rng) - 0.5) * 0.999 * kPi};
        const double ds = strip_distance(a, b);
        const Point rot{0.0, 1.0};  // exp(S) is the right half-plane; rotate onto the upper one
        metric = std::max(metric, std::abs(ds - uhp_distance(rot * std::exp(a), rot * std::exp(b))) / std::max(1.0, ds));
    }
    ck.note("cross-domain metric " + detail::num(metric, 3));
    ck.expect(metric <= 1e-9, "cross-domain metric mismatch above 1e-9");

    const std::vector<double> ts{-10.0, -100.0, -1000.0};
    for (const KoenigsModel* m : {&c.m1, &c.m2, &c.m3}) {
        for (std::size_t k = 0; k < m->petals.size(); ++k) {
            const auto g = regularity_gap(*m, m->petal(k), m->default_bases[k], ts);
            const double mx = *std::max_element(g.begin(), g.end());
            ck.note(m->name + "/" + m->petal(k).id + " gaps " + detail::num(g[0], 4) + ".." + detail::num(mx, 4));
            ck.expect(mx <= 2.0 * g[0], m->name + ": regularity gap grows beyond twice the t = -10 value");
        }
    }
    return ck.finish(11, "infrastructure properties");
}

inline std::vector<CriterionResult> run_all(std::uint64_t seed = kDefaultSeed) {
    const detail::Catalog c;
    std::vector<std::function<CriterionResult()>> checks{
        [&] { return hyperbolic_total_speed(c); },  [&] { return parabolic_log_bounds(c); },
        [&] { return tangential_dichotomy(c); },    [&] { return orthogonal_speed_slopes(c); },
        [&] { return pythagoras(c, seed); },        [&] { return base_point_independence(c, seed); },
        [&] { return forward_baseline(c); },        [&] { return generator_diagnostics(c, seed); },
        [] { return bound_arithmetic(); },          [&] { return harmonic_measure_angles(c); },
        [&] { return infrastructure(c, seed); },
    };
    std::vector<CriterionResult> out;
    int id = 1;
    for (auto& f : checks) {
        try {
            out.push_back(f());
        } catch (const std::exception& e) {
            out.push_back({id, "criterion " + std::to_string(id), false, std::string("FAILED: exception: ") + e.what()});
        }
        ++id;
    }
    return out;
}

inline void print(std::ostream& out, const std::vector<CriterionResult>& results) {
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.title;
        if (!r.detail.empty()) out << "  -- " << r.detail;
        out << '\n';
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    out << passed << "/" << results.size() << " criteria passed\n";
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

}  // namespace petallab::acceptance
