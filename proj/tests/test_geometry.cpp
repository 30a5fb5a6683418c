#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "siou/error.hpp"
#include "siou/geometry.hpp"
#include "siou/random.hpp"
#include "siou/verify.hpp"

namespace siou {
namespace {

std::vector<Corner> corners_of(const UnionSet& u) { return u.corners(); }

bool contains(const std::vector<Corner>& list, const Corner& c) {
  return std::any_of(list.begin(), list.end(), [&](const Corner& x) { return approx_equal(x, c); });
}

// Brute-force inclusion-exclusion over subsets, written without the library's
// subset enumeration.
std::vector<std::pair<Corner, int>> brute_force_frontier(const std::vector<Corner>& b) {
  std::vector<std::pair<Corner, int>> acc;
  const std::size_t k = b.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    Eigen::VectorXd m = Eigen::VectorXd::Constant(b.front().dim(), 1e300);
    int size = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) {
        m = m.cwiseMin(b[i].coords());
        ++size;
      }
    }
    const int sign = size % 2 == 1 ? 1 : -1;
    auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& e) { return e.first.coords() == m; });
    if (it == acc.end()) {
      acc.emplace_back(Corner(m), sign);
    } else {
      it->second += sign;
    }
  }
  std::erase_if(acc, [](const auto& e) { return e.second == 0; });
  return acc;
}

TEST(Corner, RejectsNegativeCoordinates) {
  EXPECT_THROW(Corner({1.0, -0.5}), GeometryError);
  EXPECT_NO_THROW(Corner({0.0, 0.0}));
  EXPECT_TRUE(Corner::origin(3).is_origin());
}

TEST(Corner, DimensionMismatchIsAnError) {
  EXPECT_THROW(meet(Corner{1.0}, Corner{1.0, 2.0}), GeometryError);
  const std::vector<Corner> mixed{{1.0, 2.0}, {1.0}};
  EXPECT_THROW(require_dimension(mixed, 2), GeometryError);
}

TEST(Corner, MeetIsComponentwiseMinimum) {
  EXPECT_EQ(meet(Corner{1.0, 3.0}, Corner{2.0, 2.0}), (Corner{1.0, 2.0}));
}

TEST(Canonicalize, Examples) {
  const std::vector<Corner> a{{1, 2}, {2, 1}};
  EXPECT_EQ(corners_of(canonicalize(a)), (std::vector<Corner>{{1, 2}, {2, 1}}));
  const std::vector<Corner> b{{1, 1}, {2, 2}};
  EXPECT_EQ(corners_of(canonicalize(b)), (std::vector<Corner>{{2, 2}}));
  const std::vector<Corner> c{{1, 3}, {2, 2}, {1, 2}};
  EXPECT_EQ(corners_of(canonicalize(c)), (std::vector<Corner>{{1, 3}, {2, 2}}));
}

TEST(Canonicalize, RemovesDuplicatesAndSorts) {
  const std::vector<Corner> in{{2, 1}, {1, 2}, {2, 1}, {0.5, 0.5}};
  EXPECT_EQ(corners_of(canonicalize(in)), (std::vector<Corner>{{1, 2}, {2, 1}}));
}

TEST(Canonicalize, IsIdempotentOnRandomInput) {
  Engine engine = make_engine({7, 0});
  for (int trial = 0; trial < 200; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + trial % 4);
    const auto input = random_corners(engine, dim, 1 + static_cast<std::size_t>(trial % 9));
    const UnionSet once = canonicalize(input);
    const UnionSet twice = canonicalize(once.corners());
    EXPECT_EQ(once, twice);
    for (std::size_t i = 0; i < once.size(); ++i) {
      for (std::size_t j = 0; j < once.size(); ++j) {
        if (i != j) EXPECT_FALSE(leq(once.corners()[i], once.corners()[j]));
      }
      if (i > 0) EXPECT_TRUE(lex_less(once.corners()[i - 1], once.corners()[i]));
    }
    for (const auto& c : input) EXPECT_TRUE(once.covers(c));
  }
}

TEST(Increment, IntersectsBWithA) {
  const std::vector<Corner> b{{3, 1}, {1, 3}};
  const Increment inc(Corner{2, 2}, b);
  EXPECT_EQ(corners_of(inc.b()), (std::vector<Corner>{{1, 2}, {2, 1}}));
}

TEST(Semilattice, Examples) {
  const std::vector<Corner> b1{{1, 2}, {2, 1}};
  EXPECT_EQ(semilattice(Increment(Corner{2, 2}, b1)), (std::vector<Corner>{{1, 2}, {2, 1}, {1, 1}}));

  const std::vector<Corner> b2{{3}};
  EXPECT_EQ(semilattice(Increment(Corner{4}, b2)), (std::vector<Corner>{{3}}));

  const std::vector<Corner> b3{{1, 4}, {2, 3}, {4, 1}};
  EXPECT_EQ(semilattice(Increment(Corner{4, 4}, b3)),
            (std::vector<Corner>{{1, 4}, {2, 3}, {4, 1}, {1, 3}, {1, 1}, {2, 1}}));
}

TEST(SubsetMeet, VisitsSubsetsBySizeThenIndex) {
  const std::vector<Corner> b{{1, 4}, {2, 3}, {4, 1}};
  std::vector<std::size_t> sizes;
  std::vector<Corner> meets;
  for_each_subset_meet(b, [&](const Corner& c, std::size_t size) {
    meets.push_back(c);
    sizes.push_back(size);
  });
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 1, 2, 2, 2, 3}));
  EXPECT_EQ(meets[3], (Corner{1, 3}));
  EXPECT_EQ(meets[6], (Corner{1, 1}));
}

TEST(SubsetMeet, TooManyCornersIsAComplexityError) {
  std::vector<Corner> b;
  for (int i = 0; i <= 20; ++i) b.push_back(Corner{double(i), double(20 - i)});
  EXPECT_THROW(for_each_subset_meet(b, [](const Corner&, std::size_t) {}), ComplexityError);
  b.pop_back();
  std::size_t visited = 0;
  for_each_subset_meet(b, [&](const Corner&, std::size_t) { ++visited; });
  EXPECT_EQ(visited, (std::size_t{1} << 20) - 1);
}

TEST(Frontier, TwoDimensionalExample) {
  const std::vector<Corner> b{{1, 2}, {2, 1}};
  const Frontier f = frontier(Increment(Corner{2, 2}, b));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f.entries[0].corner, (Corner{1, 2}));
  EXPECT_EQ(f.entries[0].sign(), 1);
  EXPECT_EQ(f.entries[1].corner, (Corner{2, 1}));
  EXPECT_EQ(f.entries[1].sign(), 1);
  EXPECT_EQ(f.entries[2].corner, (Corner{1, 1}));
  EXPECT_EQ(f.entries[2].sign(), -1);
  EXPECT_TRUE(f.has_unit_signs());
}

TEST(Frontier, OneDimensionalExample) {
  const std::vector<Corner> b{{2}};
  const Frontier f = frontier(Increment(Corner{3}, b));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.entries[0].corner, (Corner{2}));
  EXPECT_EQ(f.entries[0].coefficient, 1);
}

TEST(Frontier, ThreeDimensionalExampleWithoutCollisions) {
  const std::vector<Corner> b{{1, 1, 0.5}, {1, 0.5, 1}, {0.5, 1, 1}};
  const Frontier f = frontier(Increment(Corner{1, 1, 1}, b));
  ASSERT_EQ(f.size(), 7u);
  std::vector<std::pair<Corner, int>> expected{{{1, 1, 0.5}, 1},       {{1, 0.5, 1}, 1},
                                               {{0.5, 1, 1}, 1},       {{1, 0.5, 0.5}, -1},
                                               {{0.5, 1, 0.5}, -1},    {{0.5, 0.5, 1}, -1},
                                               {{0.5, 0.5, 0.5}, 1}};
  for (const auto& [corner, sign] : expected) {
    const auto it = std::find_if(f.entries.begin(), f.entries.end(),
                                 [&](const FrontierEntry& e) { return approx_equal(e.corner, corner); });
    ASSERT_NE(it, f.entries.end());
    EXPECT_EQ(it->coefficient, sign);
  }
}

TEST(Frontier, EmptyUnionConditionsOnTheOrigin) {
  const Frontier f = frontier(Increment(Corner{1.5, 2.0}, std::vector<Corner>{}));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(f.entries[0].corner.is_origin());
  EXPECT_EQ(f.entries[0].coefficient, 1);
}

// Three corners whose pairwise and triple minima all coincide: the net
// coefficient of (1,1,1) is 3 * (-1) + 1 = -2.
TEST(Frontier, NetCoefficientCanBeMinusTwoInThreeDimensions) {
  const std::vector<Corner> b{{1, 2, 1}, {1, 1, 2}, {2, 1, 1}};
  const Increment inc(Corner{2, 2, 2}, b);
  const Frontier f = frontier(inc);
  ASSERT_EQ(f.size(), 4u);
  const auto it = std::find_if(f.entries.begin(), f.entries.end(),
                               [](const FrontierEntry& e) { return e.corner == Corner{1, 1, 1}; });
  ASSERT_NE(it, f.entries.end());
  EXPECT_EQ(it->coefficient, -2);
  EXPECT_EQ(it->sign(), -1);
  EXPECT_FALSE(f.has_unit_signs());
  EXPECT_THROW(frontier(inc, FrontierPolicy::unit_signs), ConsistencyError);
}

TEST(Frontier, MatchesBruteForceExpansion) {
  Engine engine = make_engine({11, 0});
  for (int trial = 0; trial < 300; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + trial % 4);
    const Increment inc = random_increment(engine, dim, 5);
    const Frontier f = frontier(inc);
    const auto expected = brute_force_frontier(inc.b().corners());
    ASSERT_EQ(f.size(), expected.size());
    for (const auto& [corner, coefficient] : expected) {
      const auto it = std::find_if(f.entries.begin(), f.entries.end(),
                                   [&](const FrontierEntry& e) { return approx_equal(e.corner, corner); });
      ASSERT_NE(it, f.entries.end());
      EXPECT_EQ(it->coefficient, coefficient);
    }
  }
}

// For every point u of a grid, 1_A(u) - sum_i c_i 1_{F_i}(u) = 1_A(u) - 1_B(u).
TEST(Frontier, SignedIndicatorSumIdentityHoldsOnTheGrid) {
  Engine engine = make_engine({13, 0});
  std::size_t points = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + trial % 4);
    const Increment inc = random_increment(engine, dim, 5);
    const Frontier f = frontier(inc);
    const auto lattice = semilattice(inc);
    for (const auto& e : f.entries) {
      EXPECT_NE(e.coefficient, 0);
      EXPECT_TRUE(contains(lattice, e.corner));
    }

    // Points at multiples of 0.125 hit both the grid lines and the cell interiors.
    Eigen::VectorXi counts(dim);
    for (Eigen::Index k = 0; k < dim; ++k) counts[k] = static_cast<int>(inc.a()[k] / 0.125) + 2;
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(dim);
    while (true) {
      const Corner u(0.125 * idx.cast<double>());
      int sum = 0;
      for (const auto& e : f.entries) sum += leq(u, e.corner) ? e.coefficient : 0;
      const int in_a = leq(u, inc.a()) ? 1 : 0;
      const int in_b = inc.b().covers(u) ? 1 : 0;
      ASSERT_EQ(in_a - sum, in_a - in_b);
      ++points;
      Eigen::Index k = 0;
      while (k < dim && ++idx[k] == counts[k]) idx[k++] = 0;
      if (k == dim) break;
    }
  }
  EXPECT_GT(points, 10000u);
}

// Spot-check against the topological frontier {U : [0,U] not inside B°}.
// Retained elements are never interior. For N <= 2 the two sets coincide; from
// N = 3 on an element can touch the boundary of B and still cancel.
TEST(Frontier, CancellationAgreesWithTheInteriorTest) {
  Engine engine = make_engine({17, 0});
  std::size_t elements = 0;
  std::size_t retained_interior = 0;
  std::size_t low_dim_mismatches = 0;
  std::size_t cancelled_on_boundary = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + trial % 4);
    const Increment inc = random_increment(engine, dim, 5);
    const Frontier f = frontier(inc);
    for (const auto& u : semilattice(inc)) {
      const bool retained = std::any_of(f.entries.begin(), f.entries.end(),
                                        [&](const FrontierEntry& e) { return approx_equal(e.corner, u); });
      const bool interior = inside_interior(u, inc.b());
      ++elements;
      if (retained && interior) ++retained_interior;
      if (!retained && !interior) {
        ++cancelled_on_boundary;
        if (dim <= 2) ++low_dim_mismatches;
      }
    }
  }
  EXPECT_GT(elements, 4000u);
  EXPECT_EQ(retained_interior, 0u);
  EXPECT_EQ(low_dim_mismatches, 0u);
  EXPECT_GT(cancelled_on_boundary, 0u);
}

TEST(Frontier, BoundaryElementWithZeroNetCoefficient) {
  // (1,3,2) ∧ (3,1,3) = (1,1,2) = the triple meet: -1 + 1 = 0, yet (1,1,2) is
  // not strictly below any b_i.
  const std::vector<Corner> b{{1, 3, 2}, {2, 2, 2}, {3, 1, 3}};
  const Increment inc(Corner{4, 4, 4}, b);
  const Frontier f = frontier(inc);
  const Corner u{1, 1, 2};
  EXPECT_TRUE(contains(semilattice(inc), u));
  EXPECT_FALSE(inside_interior(u, inc.b()));
  for (const auto& e : f.entries) EXPECT_FALSE(approx_equal(e.corner, u));
}

TEST(Frontier, InteriorTestExamples) {
  const std::vector<Corner> b{{1, 2}, {2, 1}};
  const UnionSet u = canonicalize(b);
  EXPECT_FALSE(inside_interior(Corner{1, 1}, u));
  EXPECT_TRUE(inside_interior(Corner{0.5, 1.5}, u));
  EXPECT_FALSE(inside_interior(Corner{1, 2}, u));
}

TEST(MinClosure, Examples) {
  const std::vector<Corner> a{{1, 2}, {2, 1}};
  EXPECT_EQ(min_closure(a), (std::vector<Corner>{{0, 0}, {1, 1}, {1, 2}, {2, 1}}));
  const std::vector<Corner> b{{3}};
  EXPECT_EQ(min_closure(b), (std::vector<Corner>{{0}, {3}}));

  std::vector<Corner> grid;
  for (double x : {1.0, 2.0, 3.0}) {
    for (double y : {1.0, 2.0, 3.0}) grid.push_back(Corner{x, y});
  }
  const auto closed = min_closure(grid);
  EXPECT_EQ(closed.size(), 10u);
  EXPECT_TRUE(closed.front().is_origin());
  for (const auto& c : grid) EXPECT_TRUE(contains(closed, c));
}

TEST(MinClosure, IsClosedAndOrderedByALinearExtension) {
  Engine engine = make_engine({19, 0});
  for (auto extension : {LinearExtension::by_sum, LinearExtension::lexicographic}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto dim = static_cast<Eigen::Index>(1 + trial % 3);
      const auto input = random_corners(engine, dim, 1 + static_cast<std::size_t>(trial % 7));
      const auto closed = min_closure(input, extension);
      EXPECT_TRUE(closed.front().is_origin());
      for (const auto& c : input) EXPECT_TRUE(contains(closed, c));
      for (std::size_t i = 0; i < closed.size(); ++i) {
        for (std::size_t j = 0; j < closed.size(); ++j) {
          EXPECT_TRUE(contains(closed, meet(closed[i], closed[j])));
          if (j > i) {
            EXPECT_FALSE(approx_equal(closed[i], closed[j]));
            // A later corner is never strictly below an earlier one.
            EXPECT_FALSE(leq(closed[j], closed[i]));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace siou
