#include "siou/measure.hpp"

#include <sstream>
#include <vector>

#include "siou/error.hpp"

namespace siou {

MeasureSpec MeasureSpec::axis(Eigen::VectorXd alpha) {
  if (alpha.size() == 0) throw ConfigError("axis measure needs at least one alpha");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      std::ostringstream os;
      os << "axis measure alpha[" << i << "] = " << alpha[i] << " must be > 0";
      throw ConfigError(os.str());
    }
  }
  return MeasureSpec(Kind::axis, std::move(alpha));
}

double measure_rect(const MeasureSpec& spec, const Corner& t) {
  switch (spec.kind()) {
    case MeasureSpec::Kind::lebesgue:
      return t.coords().prod();
    case MeasureSpec::Kind::axis:
      if (spec.alpha().size() != t.dim()) {
        throw GeometryError("axis measure dimension does not match corner dimension");
      }
      return spec.alpha().dot(t.coords());
  }
  return 0.0;
}

double measure_union(const MeasureSpec& spec, const UnionSet& u) {
  double total = 0.0;
  for_each_subset_meet(u.corners(), [&](const Corner& m, std::size_t size) {
    const double term = measure_rect(spec, m);
    total += size % 2 == 1 ? term : -term;
  });
  return total;
}

double measure_symdiff(const MeasureSpec& spec, const Corner& u, const Corner& v) {
  const double value =
      measure_rect(spec, u) + measure_rect(spec, v) - 2.0 * measure_rect(spec, meet(u, v));
  return value < 0.0 ? 0.0 : value;
}

double measure_diff(const MeasureSpec& spec, const Corner& a, const UnionSet& b) {
  std::vector<Corner> clipped;
  clipped.reserve(b.size());
  for (const auto& c : b.corners()) clipped.push_back(meet(c, a));
  const double value = measure_rect(spec, a) - measure_union(spec, canonicalize(clipped));
  if (value < -kMeasureSlack) {
    std::ostringstream os;
    os << "m(A \\ B) = " << value << " is negative beyond rounding";
    throw ConsistencyError(os.str());
  }
  return value < 0.0 ? 0.0 : value;
}

}  // namespace siou
