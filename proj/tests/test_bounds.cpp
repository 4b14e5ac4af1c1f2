#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "petallab/bounds.hpp"

using namespace petallab;

namespace {

std::vector<double> decades(int kmin, int kmax) {
    std::vector<double> g;
    for (int k = kmin; k <= kmax; ++k) g.push_back(-std::pow(10.0, k));
    return g;
}

std::string write_temp(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST(Bounds, EmptySegment) {
    for (const auto& p : {BoundaryProfile::logrecip(), BoundaryProfile::gaussian(), BoundaryProfile::logrecip(-5.0, 2.0)}) {
        EXPECT_EQ(upper_bound(p, p.t0), p.d0);
        EXPECT_EQ(lower_bound(p, p.t0), -p.d0);
    }
}

TEST(Bounds, ConstantProfile) {
    const auto p = BoundaryProfile::custom([](double) { return 1.0; }, -1.0, 0.5);
    for (double t : {-2.0, -10.0, -1000.0}) {
        EXPECT_NEAR(upper_bound(p, t), 0.5 + (-1.0 - t), 1e-12 * std::abs(t));
        EXPECT_NEAR(lower_bound(p, t), 0.25 * std::log1p(-1.0 - t) - 0.5, 1e-13);
    }
}

TEST(Bounds, QuadratureMatchesClosedForm) {
    const auto closed = BoundaryProfile::logrecip();
    const auto quad = BoundaryProfile::custom([](double t) { return 1.0 / std::log(-t); }, -std::numbers::e);
    for (double t : {-3.0, -50.0, -1000.0, -1e5}) {
        const double a = upper_bound(closed, t), b = upper_bound(quad, t);
        EXPECT_NEAR(a, b, 1e-10 * a) << t;
    }
}

TEST(Bounds, LogRecipRatioShrinks) {
    const auto s = bound_ratio_series(BoundaryProfile::logrecip(), decades(2, 6), BoundKind::upper);
    ASSERT_EQ(s.points.size(), 5u);
    EXPECT_EQ(s.trend, Trend::decreasing);
    EXPECT_LE(s.points[1].ratio, 0.02);
    EXPECT_EQ(s.points[1].t, -1000.0);
}

TEST(Bounds, GaussianLowerRatio) {
    const auto p = BoundaryProfile::gaussian();
    const auto s = bound_ratio_series(p, decades(3, 6), BoundKind::lower);
    for (const auto& r : s.points) EXPECT_GE(r.ratio, 0.249) << r.t;
    EXPECT_LE(s.points.front().ratio, 0.25 + 1e-3);
    EXPECT_TRUE(std::isinf(upper_bound(p, -1000.0)));
    EXPECT_TRUE(std::isfinite(upper_bound(p, -3.0)));
}

TEST(Bounds, LowerNeverExceedsUpper) {
    const std::vector<BoundaryProfile> profiles{
        BoundaryProfile::logrecip(), BoundaryProfile::gaussian(),
        BoundaryProfile::custom([](double t) { return 1.0 / (1.0 + t * t); }, -0.5),
        BoundaryProfile::custom([](double t) { return 2.0 + std::sin(t); }, -1.0, 0.1)};
    for (const auto& p : profiles)
        for (double t = p.t0 - 0.01; t > -40.0; t *= 1.3) EXPECT_LE(lower_bound(p, t), upper_bound(p, t)) << p.name << " " << t;
}

TEST(Bounds, SegmentChecks) {
    EXPECT_THROW(upper_bound(BoundaryProfile::logrecip(), -1.0), DomainError);
    EXPECT_THROW(BoundaryProfile::logrecip(-1.0), DomainError);
    EXPECT_THROW(BoundaryProfile::gaussian(0.0), DomainError);
    const auto bad = BoundaryProfile::custom([](double t) { return t + 5.0; }, -1.0);
    EXPECT_THROW(upper_bound(bad, -10.0), DomainError);
}

TEST(Bounds, EmptyGrid) {
    const auto s = bound_ratio_series(BoundaryProfile::logrecip(), {}, BoundKind::upper);
    EXPECT_TRUE(s.points.empty());
    EXPECT_EQ(s.trend, Trend::flat);
    EXPECT_EQ(to_string(Trend::mixed), "mixed");
}

TEST(TabulatedProfile, InterpolatesInLogDelta) {
    const auto p = BoundaryProfile::tabulated({{-10.0, 0.01}, {-1.0, 1.0}, {-4.0, 0.1}});
    EXPECT_EQ(p.t0, -1.0);
    EXPECT_NEAR(p.delta(-4.0), 0.1, 1e-15);
    EXPECT_NEAR(p.delta(-7.0), std::sqrt(0.1 * 0.01), 1e-15);
    EXPECT_THROW(p.delta(-11.0), DomainError);
    EXPECT_THROW(upper_bound(p, -11.0), DomainError);
    // 1/delta is exponential on each piece [l, r]
    auto piece = [](double l, double r, double dl, double dr) {
        const double Ll = -std::log(dl), Lr = -std::log(dr);
        return (r - l) * (std::exp(Lr) - std::exp(Ll)) / (Lr - Ll);
    };
    const double exact = 1.0 + piece(-4.0, -1.0, 0.1, 1.0) + piece(-10.0, -4.0, 0.01, 0.1);
    EXPECT_NEAR(upper_bound(p, -10.0), exact, 1e-9 * exact);
}

TEST(TabulatedProfile, Validation) {
    EXPECT_THROW(BoundaryProfile::tabulated({{-1.0, 1.0}}), DomainError);
    EXPECT_THROW(BoundaryProfile::tabulated({{-1.0, 1.0}, {-2.0, 0.0}}), DomainError);
    EXPECT_THROW(BoundaryProfile::tabulated({{-1.0, 1.0}, {-1.0, 2.0}}), DomainError);
    EXPECT_THROW(BoundaryProfile::tabulated({{-2.0, 1.0}, {-1.0, 2.0}}, 0.0), DomainError);
}

TEST(TabulatedProfile, FromFile) {
    const auto path = write_temp("petallab_profile_ok.txt", "# t delta\n-1 1\n\n-5, 0.5\n-100 0.01  # tail\n");
    const auto p = profile_by_name(path);
    EXPECT_EQ(p.t0, -1.0);
    EXPECT_EQ(*p.t_min, -100.0);
    EXPECT_NEAR(p.delta(-5.0), 0.5, 1e-15);
    const auto bad = write_temp("petallab_profile_bad.txt", "-1 1\n-2 x\n");
    EXPECT_THROW(profile_by_name(bad), DomainError);
    EXPECT_THROW(profile_by_name("/nonexistent/profile.txt"), DomainError);
    EXPECT_EQ(profile_by_name("logrecip").name, "logrecip");
}
