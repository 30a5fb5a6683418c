#include "siou/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "siou/error.hpp"

namespace siou {

namespace {

void require_nonnegative(const Eigen::VectorXd& coords) {
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (!(coords[i] >= 0.0)) {
      std::ostringstream os;
      os << "corner coordinate " << i << " is " << coords[i] << "; coordinates must be >= 0";
      throw GeometryError(os.str());
    }
  }
}

void require_same_dim(const Corner& u, const Corner& v) {
  if (u.dim() != v.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << u.dim() << " vs " << v.dim();
    throw GeometryError(os.str());
  }
}

std::vector<double> key_of(const Corner& c) {
  return {c.coords().data(), c.coords().data() + c.dim()};
}

// Replaces coordinates that agree within the tolerance on an axis by the
// smallest of them.
void snap_axes(std::vector<Corner>& corners) {
  if (corners.empty()) return;
  const Eigen::Index dim = corners.front().dim();
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(corners.size());
  for (const auto& c : corners) coords.push_back(c.coords());

  std::vector<std::size_t> order(corners.size());
  for (Eigen::Index axis = 0; axis < dim; ++axis) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return coords[i][axis] < coords[j][axis]; });
    double anchor = coords[order.front()][axis];
    for (std::size_t idx : order) {
      double& x = coords[idx][axis];
      if (x - anchor <= kGeometryTolerance) {
        x = anchor;
      } else {
        anchor = x;
      }
    }
  }
  for (std::size_t i = 0; i < corners.size(); ++i) corners[i] = Corner(std::move(coords[i]));
}

}  // namespace

Corner::Corner(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  require_nonnegative(coords_);
}

Corner::Corner(std::initializer_list<double> coords)
    : Corner(Eigen::Map<const Eigen::VectorXd>(coords.begin(), static_cast<Eigen::Index>(coords.size()))) {}

Corner Corner::origin(Eigen::Index dim) { return Corner(Eigen::VectorXd::Zero(dim)); }

bool Corner::is_origin() const { return (coords_.array() <= kGeometryTolerance).all(); }

bool leq(const Corner& u, const Corner& v) {
  require_same_dim(u, v);
  return (u.coords().array() <= v.coords().array() + kGeometryTolerance).all();
}

bool strictly_less(const Corner& u, const Corner& v) {
  require_same_dim(u, v);
  return (u.coords().array() + kGeometryTolerance < v.coords().array()).all();
}

bool approx_equal(const Corner& u, const Corner& v) {
  require_same_dim(u, v);
  return ((u.coords() - v.coords()).array().abs() <= kGeometryTolerance).all();
}

bool lex_less(const Corner& u, const Corner& v) {
  require_same_dim(u, v);
  return std::lexicographical_compare(u.coords().begin(), u.coords().end(), v.coords().begin(),
                                      v.coords().end());
}

bool operator==(const Corner& u, const Corner& v) {
  return u.dim() == v.dim() && u.coords() == v.coords();
}

Corner meet(const Corner& u, const Corner& v) {
  require_same_dim(u, v);
  return Corner(u.coords().cwiseMin(v.coords()));
}

void require_dimension(std::span<const Corner> corners, Eigen::Index dim) {
  for (const auto& c : corners) {
    if (c.dim() != dim) {
      std::ostringstream os;
      os << "corner of dimension " << c.dim() << " in a session of dimension " << dim;
      throw GeometryError(os.str());
    }
  }
}

bool UnionSet::covers(const Corner& u) const {
  return std::any_of(corners_.begin(), corners_.end(), [&](const Corner& b) { return leq(u, b); });
}

UnionSet canonicalize(std::span<const Corner> corners) {
  UnionSet out;
  if (corners.empty()) return out;
  require_dimension(corners, corners.front().dim());

  std::vector<Corner> sorted(corners.begin(), corners.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < sorted.size() && keep; ++j) {
      if (i == j) continue;
      if (approx_equal(sorted[i], sorted[j])) {
        keep = i < j;  // first of a group of duplicates survives
      } else if (leq(sorted[i], sorted[j])) {
        keep = false;
      }
    }
    if (keep) out.corners_.push_back(sorted[i]);
  }
  return out;
}

Increment::Increment(Corner a, std::span<const Corner> b) : a_(std::move(a)) {
  require_dimension(b, a_.dim());
  std::vector<Corner> all;
  all.reserve(b.size() + 1);
  all.push_back(a_);
  for (const auto& c : b) all.push_back(meet(c, a_));
  snap_axes(all);
  a_ = all.front();
  b_ = canonicalize(std::span<const Corner>(all).subspan(1));
}

bool Frontier::has_unit_signs() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const FrontierEntry& e) { return e.coefficient == 1 || e.coefficient == -1; });
}

void for_each_subset_meet(std::span<const Corner> corners,
                          const std::function<void(const Corner&, std::size_t)>& visit) {
  const std::size_t k = corners.size();
  if (k == 0) return;
  if (k > kMaxExpansionCorners) {
    std::ostringstream os;
    os << "inclusion-exclusion over " << k << " corners exceeds the limit of " << kMaxExpansionCorners;
    throw ComplexityError(os.str());
  }
  require_dimension(corners, corners.front().dim());

  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  Eigen::VectorXd buffer(corners.front().dim());
  for (std::size_t size = 1; size <= k; ++size) {
    // Gosper's hack walks the masks of a fixed popcount in increasing order,
    // which is lexicographic order of the index combinations.
    std::uint64_t mask = (std::uint64_t{1} << size) - 1;
    while (mask <= full) {
      bool first = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (!(mask >> i & 1U)) continue;
        if (first) {
          buffer = corners[i].coords();
          first = false;
        } else {
          buffer = buffer.cwiseMin(corners[i].coords());
        }
      }
      visit(Corner(buffer), size);

      const std::uint64_t low = mask & (~mask + 1);
      const std::uint64_t ripple = mask + low;
      if (ripple == 0 || ripple > full + 1) break;
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
}

std::vector<Corner> semilattice(const Increment& inc) {
  std::vector<Corner> out;
  std::map<std::vector<double>, std::size_t> seen;
  for_each_subset_meet(inc.b().corners(), [&](const Corner& m, std::size_t) {
    if (seen.emplace(key_of(m), out.size()).second) out.push_back(m);
  });
  return out;
}

Frontier frontier(const Increment& inc, FrontierPolicy policy) {
  Frontier f;
  if (inc.b().empty()) {
    f.entries.push_back({Corner::origin(inc.dim()), 1});
    return f;
  }

  std::vector<Corner> order;
  std::vector<long> coefficient;
  std::map<std::vector<double>, std::size_t> index;
  for_each_subset_meet(inc.b().corners(), [&](const Corner& m, std::size_t size) {
    const long term = size % 2 == 1 ? 1 : -1;
    auto [it, inserted] = index.emplace(key_of(m), order.size());
    if (inserted) {
      order.push_back(m);
      coefficient.push_back(term);
    } else {
      coefficient[it->second] += term;
    }
  });

  for (std::size_t i = 0; i < order.size(); ++i) {
    if (coefficient[i] == 0) continue;
    if (policy == FrontierPolicy::unit_signs && coefficient[i] != 1 && coefficient[i] != -1) {
      std::ostringstream os;
      os << "net inclusion-exclusion coefficient " << coefficient[i] << " at corner ("
         << order[i].coords().transpose() << ") is not +1 or -1";
      throw ConsistencyError(os.str());
    }
    f.entries.push_back({order[i], static_cast<int>(coefficient[i])});
  }
  if (f.entries.empty()) throw ConsistencyError("inclusion-exclusion expansion cancelled completely");
  return f;
}

std::vector<Corner> min_closure(std::span<const Corner> corners, LinearExtension order) {
  if (corners.empty()) throw GeometryError("min_closure of an empty corner list");
  const Eigen::Index dim = corners.front().dim();
  require_dimension(corners, dim);

  std::vector<Corner> closed;
  auto insert = [&](const Corner& c) {
    for (const auto& existing : closed) {
      if (approx_equal(existing, c)) return false;
    }
    closed.push_back(c);
    return true;
  };
  insert(Corner::origin(dim));
  for (const auto& c : corners) insert(c);

  // New meets only need pairing with what exists so far; iterate to a fixed point.
  for (std::size_t i = 0; i < closed.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) insert(meet(closed[i], closed[j]));
  }

  if (order == LinearExtension::lexicographic) {
    std::sort(closed.begin(), closed.end(), lex_less);
    return closed;
  }
  // Strictly smaller corners have strictly smaller coordinate sums.
  std::sort(closed.begin(), closed.end(), [](const Corner& u, const Corner& v) {
    const double su = u.coords().sum();
    const double sv = v.coords().sum();
    if (su != sv) return su < sv;
    return lex_less(u, v);
  });
  return closed;
}

bool inside_interior(const Corner& u, const UnionSet& b) {
  return std::any_of(b.corners().begin(), b.corners().end(),
                     [&](const Corner& c) { return strictly_less(u, c); });
}

}  // namespace siou
