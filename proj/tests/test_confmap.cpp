#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "petallab/confmap.hpp"
#include "petallab/models.hpp"

using namespace petallab;

namespace {

ConformalChain single(MapStep s, CanonicalDomain target = CanonicalDomain::UpperHalfPlane) {
    return ConformalChain({s}, [](Point) { return true; }, "plane", target);
}

Point random_in(std::mt19937_64& rng, const KoenigsModel& m) {
    std::uniform_real_distribution<double> x(-6.0, 6.0), y(-6.0, 6.0);
    for (;;) {
        const Point w{x(rng), y(rng)};
        if (m.membership(w)) return w;
    }
}

}  // namespace

TEST(MapStep, ExpAtZero) {
    EXPECT_EQ(MapStep::exp().apply(0.0), Point(1.0));
    EXPECT_EQ(MapStep::exp().derivative(0.0), Point(1.0));
}

TEST(MapStep, SlitCloseSample) {
    const Point z{1.0, 1.0};
    const Point r = MapStep::slit_close().apply(z);
    EXPECT_NEAR(r.real(), 1.272019649514069, 1e-12);
    EXPECT_NEAR(r.imag(), 0.786151377757423, 1e-12);
    EXPECT_NEAR(std::abs(r * r - (z * z + 1.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(MapStep::slit_open().apply(r) - z), 0.0, 1e-14);
}

TEST(MapStep, CayleyStep) {
    const MapStep c = MapStep::mobius(cayley());
    EXPECT_NEAR(std::abs(c.apply(kI)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(c.inverse().apply(0.0) - kI), 0.0, 1e-16);
}

TEST(MapStep, AffineDerivative) {
    const MapStep s = MapStep::affine(Point{2.0, -1.0}, 3.0);
    EXPECT_EQ(s.derivative(Point{7.0, 5.0}), Point(2.0, -1.0));
}

TEST(MapStep, InvalidParameters) {
    EXPECT_THROW(MapStep::affine(0.0, 1.0), DomainError);
    EXPECT_THROW(MapStep::mobius(1.0, 2.0, 2.0, 4.0), DomainError);
    EXPECT_THROW(MapStep::power(0.0), DomainError);
    EXPECT_THROW(MapStep::log(0.0, 7.0), DomainError);
}

TEST(MapStep, EveryStepRoundTrips) {
    const std::vector<std::pair<MapStep, Point>> cases{
        {MapStep::affine(Point{0.5, 2.0}, Point{1.0, -3.0}), Point{0.3, 0.9}},
        {MapStep::mobius(cayley()), Point{0.3, 0.9}},
        {MapStep::exp(-kPi / 2, kPi / 2), Point{0.4, 1.2}},
        {MapStep::log(-kPi / 2, kPi / 2), Point{0.4, 1.2}},
        {MapStep::power(2.0 / 3.0, 0.0, 1.5 * kPi), Point{-0.4, -1.2}},
        {MapStep::power(0.5, -kPi, kPi), Point{-3.0, 0.01}},
        {MapStep::slit_close(), Point{0.2, 0.5}},
        {MapStep::slit_open(), Point{-0.2, 0.5}},
    };
    for (const auto& [s, z] : cases) {
        ASSERT_FALSE(s.reject(z)) << s.to_text();
        const Point w = s.apply(z);
        const MapStep inv = s.inverse();
        ASSERT_FALSE(inv.reject(w)) << s.to_text();
        EXPECT_NEAR(std::abs(inv.apply(w) - z), 0.0, 1e-11) << s.to_text();
    }
}

TEST(MapStep, BranchCutRejected) {
    const MapStep lg = MapStep::log();
    EXPECT_TRUE(lg.reject(-2.0).has_value());
    EXPECT_TRUE(lg.reject(Point{-2.0, 1e-13}).has_value());
    EXPECT_FALSE(lg.reject(Point{-2.0, 1e-6}).has_value());
    EXPECT_TRUE(MapStep::slit_close().reject(Point{0.0, 0.5}).has_value());
}

TEST(MapStep, TextRoundTrip) {
    for (const auto& m : catalog()) {
        const std::string text = m.chain.to_text();
        const auto steps = ConformalChain::parse_steps(text);
        ASSERT_EQ(steps.size(), m.chain.steps().size());
        std::string again;
        for (const auto& s : steps) again += s.to_text() + "\n";
        EXPECT_EQ(again, text);
    }
}

TEST(MapStep, GoldenTextForStripSlit) {
    EXPECT_EQ(find_model("strip-slit").chain.to_text(),
              "Exp -1.5707963267948966 1.5707963267948966\n"
              "Mobius 0 1 0 0 0 0 1 0\n"
              "SlitClose\n");
}

TEST(ConformalChain, ErrorCarriesStepIndex) {
    const ConformalChain ch({MapStep::affine(1.0, 0.0), MapStep::log()}, [](Point) { return true; }, "plane",
                            CanonicalDomain::StripPi);
    try {
        ch.eval(-2.0);
        FAIL() << "expected ChainError";
    } catch (const ChainError& e) {
        EXPECT_EQ(e.step(), 1u);
    }
}

TEST(ConformalChain, SourceCheck) {
    const auto m = find_model("strip-slit");
    EXPECT_THROW(m.chain.eval(-3.0), ChainError);
    EXPECT_THROW(m.chain.eval(Point{0.0, 2.0}), ChainError);
    EXPECT_THROW(m.chain.eval_inverse(Point{1.0, -1.0}), DomainError);
}

TEST(ConformalChain, InverseExamples) {
    EXPECT_NEAR(std::abs(single(MapStep::exp(-kPi / 2, kPi / 2), CanonicalDomain::StripPi).eval_inverse(1.0)), 0.0,
                1e-16);
    EXPECT_NEAR(std::abs(single(MapStep::mobius(cayley()), CanonicalDomain::Disk).eval_inverse(0.0) - kI), 0.0, 1e-16);
}

TEST(ConformalChain, DerivativeMatchesFiniteDifference) {
    std::mt19937_64 rng(11);
    for (const auto& m : catalog()) {
        for (int i = 0; i < 50; ++i) {
            const Point w = random_in(rng, m);
            if (m.boundary_distance(w) < 1e-3) continue;
            const double h = 1e-6;
            const Point fd = (m.chain.eval(w + h) - m.chain.eval(w - h)) / (2 * h);
            const Point d = m.chain.derivative(w);
            // central-difference truncation plus the rounding floor eps |f| / h
            const double floor = 1e-9 * std::abs(m.chain.eval(w));
            EXPECT_NEAR(std::abs(d - fd), 0.0, 1e-6 * std::abs(d) + floor) << m.name << " at " << w;
            EXPECT_NE(d, Point{});
        }
    }
}

TEST(ConformalChain, RoundTripOnTargetPoints) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> x(-4.0, 4.0), y(0.02, 4.0);
    for (const auto& m : catalog()) {
        for (int i = 0; i < 1000; ++i) {
            const Point q{x(rng), y(rng)};
            const Point back = m.chain.eval(m.chain.eval_inverse(q));
            EXPECT_LE(std::abs(back - q), 1e-10 * std::max(1.0, std::abs(q))) << m.name << " at " << q;
        }
    }
}

TEST(ConformalChain, ImagesStayInTarget) {
    std::mt19937_64 rng(13);
    for (const auto& m : catalog()) {
        for (int i = 0; i < 1000; ++i) {
            const Point w = random_in(rng, m);
            const Point q = m.chain.eval(w);
            EXPECT_TRUE(contains(CanonicalDomain::UpperHalfPlane, q)) << m.name << " at " << w;
            EXPECT_NE(m.chain.derivative(w), Point{});
        }
    }
}

TEST(PushBoundaryPoint, StripEndAtInfinity) {
    const ConformalChain ch({MapStep::exp(-kPi / 2, kPi / 2), MapStep::mobius(1.0, -1.0, 1.0, 1.0)},
                            [](Point w) { return std::abs(w.imag()) < kPi / 2; }, "strip", CanonicalDomain::Disk);
    const auto b = push_boundary_point(ch, BoundaryPoint::at_infinity(), Approach{0.0, 1.0});
    ASSERT_FALSE(b.is_infinite());
    EXPECT_NEAR(std::abs(b.value - Point(1.0)), 0.0, 1e-8);
}

TEST(PushBoundaryPoint, SlitSides) {
    const ConformalChain ch = single(MapStep::slit_close());
    const auto right = push_boundary_point(ch, BoundaryPoint::finite(0.0), Approach{0.0, Point{1.0, 1.0}});
    const auto left = push_boundary_point(ch, BoundaryPoint::finite(0.0), Approach{0.0, Point{-1.0, 1.0}});
    ASSERT_FALSE(right.is_infinite());
    ASSERT_FALSE(left.is_infinite());
    EXPECT_NEAR(std::abs(right.value - Point(1.0)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(left.value - Point(-1.0)), 0.0, 1e-8);
}

TEST(PushBoundaryPoint, IdentityChain) {
    const ConformalChain ch({}, [](Point w) { return w.imag() > 0.0; }, "upper half-plane",
                            CanonicalDomain::UpperHalfPlane);
    const auto b = push_boundary_point(ch, BoundaryPoint::finite(2.0), Approach{0.0, kI});
    ASSERT_FALSE(b.is_infinite());
    EXPECT_NEAR(std::abs(b.value - Point(2.0)), 0.0, 1e-12);
    EXPECT_TRUE(push_boundary_point(ch, BoundaryPoint::at_infinity(), Approach{kI, kI}).is_infinite());
}
