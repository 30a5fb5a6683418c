#ifndef SIOU_GEOMETRY_HPP_
#define SIOU_GEOMETRY_HPP_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace siou {

/// Absolute tolerance for coordinate comparisons. Corners closer than this in
/// every coordinate are treated as the same corner.
inline constexpr double kGeometryTolerance = 1e-12;

/// Upper bound on the number of corners in an inclusion-exclusion expansion.
inline constexpr std::size_t kMaxExpansionCorners = 20;

/// A point t of R^N_+ standing for the rectangle [0,t]. The origin stands for
/// the minimal set of the collection.
class Corner {
 public:
  Corner() = default;
  explicit Corner(Eigen::VectorXd coords);
  Corner(std::initializer_list<double> coords);

  static Corner origin(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return coords_.size(); }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  bool is_origin() const;

 private:
  Eigen::VectorXd coords_;
};

/// Componentwise u <= v, up to kGeometryTolerance.
bool leq(const Corner& u, const Corner& v);
/// Componentwise u < v (strict in every coordinate, beyond the tolerance).
bool strictly_less(const Corner& u, const Corner& v);
bool approx_equal(const Corner& u, const Corner& v);
/// Exact lexicographic order on coordinates.
bool lex_less(const Corner& u, const Corner& v);
bool operator==(const Corner& u, const Corner& v);

/// Intersection of rectangles: the componentwise minimum.
Corner meet(const Corner& u, const Corner& v);

/// Throws GeometryError unless every corner has dimension `dim`.
void require_dimension(std::span<const Corner> corners, Eigen::Index dim);

/// Finite union of rectangles held as its extremal representation: an
/// antichain of corners in lexicographic order.
class UnionSet {
 public:
  UnionSet() = default;

  const std::vector<Corner>& corners() const noexcept { return corners_; }
  std::size_t size() const noexcept { return corners_.size(); }
  bool empty() const noexcept { return corners_.empty(); }
  /// Whether [0,u] lies in the union (Shape: some single rectangle covers it).
  bool covers(const Corner& u) const;

  friend bool operator==(const UnionSet&, const UnionSet&) = default;

 private:
  friend UnionSet canonicalize(std::span<const Corner> corners);
  std::vector<Corner> corners_;
};

/// Removes dominated and duplicate corners and sorts the rest.
UnionSet canonicalize(std::span<const Corner> corners);

/// The increment C = [0,a] \ B with B = union of [0,b_i] and every b_i <= a.
class Increment {
 public:
  /// Each b corner is intersected with `a` before canonicalization, and the
  /// coordinates are snapped per axis so that equal minima compare exactly.
  Increment(Corner a, std::span<const Corner> b);

  const Corner& a() const noexcept { return a_; }
  const UnionSet& b() const noexcept { return b_; }
  Eigen::Index dim() const noexcept { return a_.dim(); }

 private:
  Corner a_;
  UnionSet b_;
};

struct FrontierEntry {
  Corner corner;
  /// Net inclusion-exclusion coefficient; never zero.
  int coefficient = 1;

  int sign() const noexcept { return coefficient > 0 ? 1 : -1; }
};

struct Frontier {
  std::vector<FrontierEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// True when every coefficient is +1 or -1.
  bool has_unit_signs() const;
};

enum class FrontierPolicy {
  /// Keep integer multiplicities (exact for any dimension).
  multiplicity,
  /// Throw ConsistencyError on a coefficient other than +1 or -1.
  unit_signs,
};

/// Visits the componentwise minimum of every nonempty subset of `corners`,
/// subsets ordered by size and then lexicographically by index. The second
/// argument is the subset size.
void for_each_subset_meet(std::span<const Corner> corners,
                          const std::function<void(const Corner&, std::size_t)>& visit);

/// All componentwise minima of nonempty subsets of the b corners, deduplicated,
/// in order of first appearance.
std::vector<Corner> semilattice(const Increment& inc);

/// Signed conditioning set of an increment, from cancellation in the full
/// inclusion-exclusion expansion of the union of the b corners. An empty union
/// yields the single entry (origin, +1).
Frontier frontier(const Increment& inc, FrontierPolicy policy = FrontierPolicy::multiplicity);

/// Total orders compatible with the componentwise partial order.
enum class LinearExtension {
  /// Coordinate sum, ties broken lexicographically.
  by_sum,
  lexicographic,
};

/// Smallest superset closed under componentwise minimum, including the origin,
/// sorted by a linear extension of the componentwise order.
std::vector<Corner> min_closure(std::span<const Corner> corners,
                                LinearExtension order = LinearExtension::by_sum);

/// Whether [0,u] lies inside the topological interior of B (relative to R^N_+).
bool inside_interior(const Corner& u, const UnionSet& b);

}  // namespace siou

#endif  // SIOU_GEOMETRY_HPP_
