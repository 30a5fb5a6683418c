#ifndef SIOU_MEASURE_HPP_
#define SIOU_MEASURE_HPP_

#include <Eigen/Core>

#include "siou/geometry.hpp"

namespace siou {

/// The Radon measure on R^N_+ driving the kernel: Lebesgue measure, or the
/// axis measure m_alpha(A) = sum_i alpha_i * |A ∩ e_i| that only charges the
/// coordinate axes.
class MeasureSpec {
 public:
  enum class Kind { lebesgue, axis };

  static MeasureSpec lebesgue() { return MeasureSpec(Kind::lebesgue, {}); }
  /// Throws ConfigError unless every alpha_i > 0.
  static MeasureSpec axis(Eigen::VectorXd alpha);

  Kind kind() const noexcept { return kind_; }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }

 private:
  MeasureSpec(Kind kind, Eigen::VectorXd alpha) : kind_(kind), alpha_(std::move(alpha)) {}

  Kind kind_ = Kind::lebesgue;
  Eigen::VectorXd alpha_;
};

/// Slack below zero absorbed as rounding before a difference measure is an error.
inline constexpr double kMeasureSlack = 1e-9;

double measure_rect(const MeasureSpec& spec, const Corner& t);

/// Exact inclusion-exclusion; at most kMaxExpansionCorners corners.
double measure_union(const MeasureSpec& spec, const UnionSet& u);

/// m([0,u] Δ [0,v]).
double measure_symdiff(const MeasureSpec& spec, const Corner& u, const Corner& v);

/// m([0,a] \ B), with B first intersected with [0,a].
double measure_diff(const MeasureSpec& spec, const Corner& a, const UnionSet& b);

}  // namespace siou

#endif  // SIOU_MEASURE_HPP_
