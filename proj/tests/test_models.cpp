#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "petallab/models.hpp"
#include "petallab/semigroup.hpp"

using namespace petallab;

namespace {

// Boundary of each domain sampled on a fine grid over a bounded window.
std::vector<Point> boundary_samples(const std::string& name) {
    std::vector<Point> pts;
    const double h = 5e-4;
    for (double s = 0.0; s <= 40.0; s += h) {
        if (name == "strip-slit") {
            pts.push_back(-s);
            pts.push_back({s - 20.0, kPi / 2});
            pts.push_back({s - 20.0, -kPi / 2});
        } else if (name == "sector-parabolic") {
            pts.push_back(-s);
            pts.push_back({0.0, -s});
        } else {
            pts.push_back(-1.0 - s);
        }
    }
    return pts;
}

Point random_point(std::mt19937_64& rng, const KoenigsModel& m, double box = 5.0) {
    std::uniform_real_distribution<double> u(-box, box);
    for (;;) {
        const Point w{u(rng), u(rng)};
        if (m.membership(w)) return w;
    }
}

bool leaves_omega_backward(const KoenigsModel& m, Point w) {
    const double horizon = m.is_elliptic() ? 600.0 : 2000.0;  // e^T stays finite
    for (double T = 0.25; T <= horizon; T *= 1.5) {
        const Point p = m.is_elliptic() ? std::exp(m.mu * T) * w : w - T;
        if (!m.membership(p)) return true;
    }
    return false;
}

bool same_boundary_point(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return std::abs(a.value - b.value) < 1e-8;
}

}  // namespace

TEST(Catalog, NamesAndKinds) {
    const auto models = catalog();
    ASSERT_EQ(models.size(), 3u);
    EXPECT_EQ(models[0].name, "strip-slit");
    EXPECT_EQ(models[0].kind, SemigroupKind::hyperbolic);
    EXPECT_EQ(models[1].kind, SemigroupKind::parabolic);
    EXPECT_EQ(models[2].kind, SemigroupKind::elliptic);
    EXPECT_THROW(find_model("nope"), DomainError);
    EXPECT_THROW(models[0].petal(5), DomainError);
}

TEST(Catalog, SpectralValuesFromGeometry) {
    const auto m1 = find_model("strip-slit");
    for (const auto& P : m1.petals) {
        ASSERT_TRUE(P.lambda.has_value());
        EXPECT_DOUBLE_EQ(*P.lambda, lambda_from_strip_width(P.region.width()));
        EXPECT_DOUBLE_EQ(*P.lambda, -2.0);
    }
    const auto m3 = find_model("koebe-elliptic");
    EXPECT_DOUBLE_EQ(lambda_from_amplitude(m3.mu, m3.petals[0].region.amplitude), -0.5);
    EXPECT_DOUBLE_EQ(*m3.petals[0].lambda, -0.5);
    EXPECT_FALSE(find_model("sector-parabolic").petals[0].lambda.has_value());
}

TEST(Catalog, KoebeClosedForm) {
    const auto m3 = find_model("koebe-elliptic");
    EXPECT_NEAR(std::abs(koenigs(m3, 0.5) - Point(8.0)), 0.0, 1e-13);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 200; ++i) {
        const Point z{u(rng), u(rng)};
        if (std::abs(z) >= 0.95) continue;
        const Point h = koenigs(m3, z);
        const Point expected = 4.0 * z / ((1.0 - z) * (1.0 - z));
        EXPECT_NEAR(std::abs(h - expected), 0.0, 1e-11 * std::max(1.0, std::abs(expected)));
        EXPECT_FALSE(h.imag() == 0.0 && h.real() <= -1.0);
    }
}

TEST(Membership, Examples) {
    const auto m1 = find_model("strip-slit");
    EXPECT_TRUE(m1.membership(Point(1.0)));
    EXPECT_FALSE(m1.membership(Point(-1.0)));
    EXPECT_FALSE(m1.membership(Point(0.0)));
    EXPECT_TRUE(m1.membership(Point{-1.0, 1e-9}));
    EXPECT_FALSE(m1.membership(Point{0.0, 2.0}));

    const auto m2 = find_model("sector-parabolic");
    EXPECT_FALSE(m2.membership(Point{-1.0, -1.0}));
    EXPECT_FALSE(m2.membership(Point(-1.0)));
    EXPECT_TRUE(m2.membership(Point{-1.0, 1.0}));
    EXPECT_TRUE(m2.membership(Point{1.0, -1.0}));

    const auto m3 = find_model("koebe-elliptic");
    EXPECT_FALSE(m3.membership(Point(-2.0)));
    EXPECT_TRUE(m3.membership(Point(-0.5)));
    EXPECT_TRUE(m3.membership(Point{-2.0, 1e-9}));
    EXPECT_FALSE(m3.membership(Point{std::nan(""), 0.0}));
}

TEST(BoundaryDistance, Examples) {
    EXPECT_DOUBLE_EQ(find_model("strip-slit").boundary_distance(1.0), 1.0);
    EXPECT_DOUBLE_EQ(find_model("sector-parabolic").boundary_distance(kI), 1.0);
    EXPECT_DOUBLE_EQ(find_model("koebe-elliptic").boundary_distance(1.0), 2.0);
    EXPECT_THROW(find_model("koebe-elliptic").boundary_distance(-3.0), DomainError);
}

TEST(BoundaryDistance, MatchesDiscretizedBoundary) {
    std::mt19937_64 rng(6);
    for (const auto& m : catalog()) {
        const auto boundary = boundary_samples(m.name);
        for (int i = 0; i < 60; ++i) {
            const Point w = random_point(rng, m, 4.0);
            double best = std::numeric_limits<double>::infinity();
            for (const Point& b : boundary) best = std::min(best, std::abs(w - b));
            EXPECT_NEAR(m.boundary_distance(w), best, 3e-4) << m.name << " at " << w;
        }
    }
}

TEST(Petals, Assignment) {
    const auto m1 = find_model("strip-slit");
    ASSERT_NE(m1.petal_of({1.0, 0.5}), nullptr);
    EXPECT_EQ(m1.petal_of({1.0, 0.5})->id, "upper");
    EXPECT_EQ(m1.petal_of({1.0, -0.5})->id, "lower");
    EXPECT_EQ(m1.petal_of(2.0), nullptr);

    const auto m2 = find_model("sector-parabolic");
    EXPECT_EQ(m2.petal_of({1.0, 1.0})->id, "upper");
    EXPECT_EQ(m2.petal_of({1.0, -1.0}), nullptr);

    const auto m3 = find_model("koebe-elliptic");
    EXPECT_EQ(m3.petal_of(1.0)->id, "sector");
    EXPECT_EQ(m3.petal_of(-0.5), nullptr);
}

TEST(Petals, InsideOmegaAndBackwardInvariant) {
    std::mt19937_64 rng(7);
    for (const auto& m : catalog()) {
        for (std::size_t k = 0; k < m.petals.size(); ++k) {
            for (const Point w : sample_petal(m, k, 200, 40 + k)) {
                ASSERT_TRUE(m.membership(w));
                ASSERT_EQ(m.petal_index_of(OmegaPoint::direct(w)), k);
                EXPECT_FALSE(leaves_omega_backward(m, w)) << m.name << " at " << w;
            }
        }
    }
}

TEST(Petals, ConvexOrSpirallike) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& m : catalog()) {
        for (std::size_t k = 0; k < m.petals.size(); ++k) {
            const auto& R = m.petals[k].region;
            const auto pts = sample_petal(m, k, 100, 60 + k);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                if (!m.is_elliptic()) {
                    const double s = u(rng);
                    EXPECT_TRUE(R.contains((1 - s) * pts[i] + s * pts[i + 1])) << m.name;
                } else {
                    for (double t : {-20.0, -1.0, 0.5, 30.0})
                        EXPECT_TRUE(R.contains(std::exp(-m.mu * t) * pts[i])) << m.name;
                }
            }
        }
    }
}

TEST(Petals, OmegaIsForwardInvariant) {
    std::mt19937_64 rng(9);
    for (const auto& m : catalog()) {
        for (int i = 0; i < 300; ++i) {
            const Point w = random_point(rng, m);
            for (double t : {0.1, 1.0, 10.0, 1000.0}) {
                const Point p = m.is_elliptic() ? std::exp(-m.mu * t) * w : w + t;
                EXPECT_TRUE(m.membership(p)) << m.name << " at " << w;
            }
        }
    }
}

TEST(Petals, MaximalUnderInflation) {
    std::mt19937_64 rng(10);
    for (const auto& m : catalog()) {
        for (std::size_t k = 0; k < m.petals.size(); ++k) {
            const auto& R = m.petals[k].region;
            const auto big = R.inflated(1e-3);
            int probes = 0;
            for (int i = 0; i < 20000 && probes < 50; ++i) {
                const Point w = random_point(rng, m);
                Point p = w;
                // push the sample into the thin shell between the region and its inflation
                switch (R.shape) {
                    case PetalRegion::Shape::Strip: p = {w.real(), (i % 2 ? R.hi : R.lo) + (i % 2 ? 5e-4 : -5e-4)}; break;
                    case PetalRegion::Shape::HalfPlane: p = {w.real(), R.lo - 5e-4}; break;
                    case PetalRegion::Shape::Sector: p = -std::abs(w) * std::polar(1.0, 1e-4 * (i % 3 - 1)); break;
                }
                if (!m.membership(p) || R.contains(p) || !big.contains(p)) continue;
                ++probes;
                const auto other = m.petal_index_of(OmegaPoint::direct(p));
                EXPECT_TRUE((other && *other != k) || leaves_omega_backward(m, p)) << m.name << " at " << p;
            }
            EXPECT_GT(probes, 10) << m.name;
        }
    }
}

TEST(Petals, RepellingPointsMatchBackwardLimits) {
    for (const auto& m : catalog()) {
        for (std::size_t k = 0; k < m.petals.size(); ++k) {
            const auto& P = m.petals[k];
            const Point base = m.default_bases[k];
            const Point dir = m.is_elliptic() ? base : Point(-1.0);
            const auto b = push_boundary_point(m.chain, BoundaryPoint::at_infinity(), Approach{base, dir});
            EXPECT_TRUE(same_boundary_point(b, P.sigma_canonical)) << m.name << "/" << P.id;
        }
    }
    const auto m1 = find_model("strip-slit");
    EXPECT_NEAR(std::abs(m1.petals[0].sigma_disk() - kI), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m1.petals[1].sigma_disk() + kI), 0.0, 1e-15);
}

TEST(Petals, DenjoyWolffPoint) {
    for (const auto& m : catalog()) {
        if (m.is_elliptic()) {
            ASSERT_TRUE(m.dw_interior.has_value());
            EXPECT_NEAR(std::abs(m.chain.eval(0.0) - *m.dw_interior), 0.0, 1e-15);
            continue;
        }
        ASSERT_TRUE(m.dw_point.has_value());
        const auto b = push_boundary_point(m.chain, BoundaryPoint::at_infinity(), Approach{m.default_bases[0], 1.0});
        EXPECT_TRUE(same_boundary_point(b, *m.dw_point)) << m.name;
    }
}

TEST(Charts, AgreeWithChain) {
    std::mt19937_64 rng(14);
    for (const auto& m : catalog()) {
        std::vector<BoundaryPoint> ends{BoundaryPoint::at_infinity()};
        if (m.name == "strip-slit") ends = {BoundaryPoint::at_infinity(), BoundaryPoint::finite(-1.0), BoundaryPoint::finite(1.0)};
        for (int i = 0; i < 500; ++i) {
            const Point w = random_point(rng, m, 4.0);
            for (const auto& e : ends) {
                const Point a = std::exp(m.normalized_log(OmegaPoint::direct(w), e).log);
                const Point b = std::exp(m.normalized_log_via_chain(w, e).log);
                EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9 * std::abs(b)) << m.name << " at " << w;
            }
        }
    }
}

TEST(Charts, FarBackwardPointsStayFinite) {
    const auto m1 = find_model("strip-slit");
    for (double re : {-50.0, -400.0, -5000.0}) {
        const UhpLog L = m1.normalized_log(OmegaPoint::direct({re, kPi / 4}), BoundaryPoint::finite(-1.0));
        EXPECT_TRUE(L.valid());
        EXPECT_NEAR(L.log.real(), -2.0 * re + std::log(2.0), 1e-9 * std::abs(re));
    }
    const auto m3 = find_model("koebe-elliptic");
    const UhpLog L = m3.normalized_log(OmegaPoint::from_log({2000.0, 0.3}), BoundaryPoint::at_infinity());
    EXPECT_TRUE(L.valid());
    EXPECT_NEAR(L.log.real(), 1000.0, 1e-9);
}

TEST(OmegaPointRepr, DirectAndLog) {
    const auto a = OmegaPoint::from_log({1.0, 0.5});
    ASSERT_TRUE(a.direct_value().has_value());
    EXPECT_NEAR(std::abs(*a.direct_value() - std::exp(Point{1.0, 0.5})), 0.0, 1e-15);
    const auto b = OmegaPoint::from_log({900.0, 0.5});
    EXPECT_TRUE(b.logarithmic);
    EXPECT_FALSE(b.direct_value().has_value());
    EXPECT_EQ(b.log(), Point(900.0, 0.5));
}
