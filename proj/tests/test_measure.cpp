#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "siou/error.hpp"
#include "siou/measure.hpp"
#include "siou/random.hpp"
#include "siou/verify.hpp"

namespace siou {
namespace {

const MeasureSpec kLebesgue = MeasureSpec::lebesgue();

UnionSet union_of(std::vector<Corner> corners) { return canonicalize(corners); }

TEST(MeasureSpec, AxisNeedsPositiveAlpha) {
  EXPECT_THROW(MeasureSpec::axis(Eigen::Vector2d(1.0, 0.0)), ConfigError);
  EXPECT_THROW(MeasureSpec::axis(Eigen::Vector2d(-1.0, 2.0)), ConfigError);
  EXPECT_NO_THROW(MeasureSpec::axis(Eigen::Vector2d(1.0, 2.0)));
}

TEST(MeasureRect, Examples) {
  EXPECT_DOUBLE_EQ(measure_rect(kLebesgue, Corner{2, 3}), 6.0);
  EXPECT_DOUBLE_EQ(measure_rect(MeasureSpec::axis(Eigen::Vector2d(1, 2)), Corner{3, 4}), 11.0);
  EXPECT_EQ(measure_rect(kLebesgue, Corner::origin(3)), 0.0);
  EXPECT_EQ(measure_rect(MeasureSpec::axis(Eigen::Vector3d(1, 2, 3)), Corner::origin(3)), 0.0);
}

TEST(MeasureUnion, Examples) {
  const auto b = union_of({{1, 2}, {2, 1}});
  EXPECT_NEAR(measure_union(kLebesgue, b), 3.0, 1e-15);
  EXPECT_NEAR(measure_union(MeasureSpec::axis(Eigen::Vector2d(1, 1)), b), 4.0, 1e-15);
  const auto single = union_of({{1.5, 0.25, 2}});
  EXPECT_DOUBLE_EQ(measure_union(kLebesgue, single), measure_rect(kLebesgue, Corner{1.5, 0.25, 2}));
}

TEST(MeasureUnion, TooManyCornersIsAComplexityError) {
  std::vector<Corner> b;
  for (int i = 0; i <= 20; ++i) b.push_back(Corner{double(i), double(20 - i)});
  EXPECT_THROW(measure_union(kLebesgue, canonicalize(b)), ComplexityError);
}

TEST(MeasureSymdiff, Examples) {
  EXPECT_DOUBLE_EQ(measure_symdiff(kLebesgue, Corner{1}, Corner{2}), 1.0);
  EXPECT_DOUBLE_EQ(measure_symdiff(kLebesgue, Corner{1, 2}, Corner{2, 1}), 2.0);
  EXPECT_EQ(measure_symdiff(kLebesgue, Corner{1.3, 0.7}, Corner{1.3, 0.7}), 0.0);
}

TEST(MeasureDiff, Examples) {
  EXPECT_NEAR(measure_diff(kLebesgue, Corner{2, 2}, union_of({{1, 2}, {2, 1}})), 1.0, 1e-15);
  EXPECT_EQ(measure_diff(kLebesgue, Corner{1.7}, union_of({{1.7}})), 0.0);
  EXPECT_DOUBLE_EQ(measure_diff(MeasureSpec::axis(Eigen::Vector2d(1, 2)), Corner{3, 4}, union_of({{3, 0}})), 8.0);
}

TEST(MeasureDiff, IntersectsBWithA) {
  EXPECT_NEAR(measure_diff(kLebesgue, Corner{2, 2}, union_of({{3, 1}})), 2.0, 1e-15);
}

TEST(MeasureProperties, MonotoneInTheCorner) {
  Engine engine = make_engine({23, 0});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const MeasureSpec axis = MeasureSpec::axis(Eigen::Vector3d(0.5, 1.0, 3.0));
  for (int trial = 0; trial < 500; ++trial) {
    const Corner v = random_corners(engine, 3, 1).front();
    Eigen::VectorXd u = v.coords();
    for (Eigen::Index k = 0; k < 3; ++k) u[k] *= unit(engine);
    EXPECT_LE(measure_rect(kLebesgue, Corner(u)), measure_rect(kLebesgue, v));
    EXPECT_LE(measure_rect(axis, Corner(u)), measure_rect(axis, v));
  }
}

TEST(MeasureProperties, SymdiffIsAPseudometric) {
  Engine engine = make_engine({29, 0});
  for (const auto& spec : {kLebesgue, MeasureSpec::axis(Eigen::Vector3d(1.0, 2.0, 0.5))}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto c = random_corners(engine, 3, 3);
      const double uv = measure_symdiff(spec, c[0], c[1]);
      const double vu = measure_symdiff(spec, c[1], c[0]);
      const double vw = measure_symdiff(spec, c[1], c[2]);
      const double uw = measure_symdiff(spec, c[0], c[2]);
      EXPECT_GE(uv, 0.0);
      EXPECT_EQ(uv, vu);
      EXPECT_EQ(measure_symdiff(spec, c[0], c[0]), 0.0);
      EXPECT_LE(uw, uv + vw + 1e-9);
    }
  }
}

// Riemann sum of the union's indicator on a fine grid as an oracle.
TEST(MeasureProperties, UnionMatchesRiemannSum) {
  Engine engine = make_engine({31, 0});
  std::uniform_real_distribution<double> coord(0.05, 2.0);
  const double h = 0.005;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Corner> corners;
    const int k = 1 + trial % 5;
    for (int i = 0; i < k; ++i) corners.push_back(Corner{coord(engine), coord(engine)});
    const UnionSet u = canonicalize(corners);
    double sum = 0.0;
    for (double x = h / 2; x < 2.0; x += h) {
      for (double y = h / 2; y < 2.0; y += h) {
        if (u.covers(Corner{x, y})) sum += h * h;
      }
    }
    // Each boundary cell misclassifies at most one cell of area h^2; the
    // boundary has length at most 4 * 2.
    EXPECT_NEAR(measure_union(kLebesgue, u), sum, 8.0 * h);
  }
}

TEST(MeasureProperties, MonotoneContinuityAlongIncreasingSequences) {
  const Corner t{1.5, 0.75, 2.0};
  for (const auto& spec : {kLebesgue, MeasureSpec::axis(Eigen::Vector3d(1.0, 2.0, 0.5))}) {
    double previous = -1.0;
    double gap = 1.0;
    for (int n = 1; n <= 60; ++n) {
      const Corner tn(t.coords() * (1.0 - std::ldexp(1.0, -n)));
      const double m = measure_rect(spec, tn);
      EXPECT_GE(m, previous);
      previous = m;
      gap = measure_rect(spec, t) - m;
    }
    EXPECT_LE(gap, 1e-9);
    EXPECT_GE(gap, 0.0);
  }
}

}  // namespace
}  // namespace siou
