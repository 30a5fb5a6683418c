#ifndef SIOU_KERNEL_HPP_
#define SIOU_KERNEL_HPP_

#include <span>
#include <vector>

#include "siou/geometry.hpp"
#include "siou/measure.hpp"

namespace siou {

/// Decay rate lambda, noise scale sigma and the underlying measure.
class KernelParams {
 public:
  /// Throws KernelError unless lambda > 0 and sigma > 0.
  KernelParams(double lambda, double sigma, MeasureSpec measure);

  double lambda() const noexcept { return lambda_; }
  double sigma() const noexcept { return sigma_; }
  const MeasureSpec& measure() const noexcept { return measure_; }

  /// sigma^2 / (2 lambda).
  double stationary_variance() const noexcept { return sigma_ * sigma_ / (2.0 * lambda_); }

 private:
  double lambda_;
  double sigma_;
  MeasureSpec measure_;
};

struct WeightedCorner {
  Corner corner;
  /// Carries the frontier coefficient.
  double weight;
};

/// Conditional law of X_A given the frontier values x:
/// Normal(sum_i w_i x_i, variance).
struct TransitionParams {
  std::vector<WeightedCorner> weights;
  double variance = 0.0;

  double conditional_mean(std::span<const double> frontier_values) const;
};

/// Negative slack on a transition variance absorbed as rounding.
inline constexpr double kVarianceSlack = 1e-10;

double cov_stationary(const KernelParams& p, const Corner& u, const Corner& v);

/// Covariance of the process started at a point mass.
double cov_dirac(const KernelParams& p, const Corner& u, const Corner& v);
double mean_dirac(const KernelParams& p, double x0, const Corner& u);

TransitionParams transition_params(const KernelParams& p, const Increment& inc);
/// Same, reusing a frontier already computed for an increment with top corner `a`.
TransitionParams transition_params(const KernelParams& p, const Corner& a, const Frontier& f);

/// Gaussian transition density at y. Throws KernelError when the variance is 0.
double transition_density(const TransitionParams& tp, std::span<const double> frontier_values,
                          double y);

}  // namespace siou

#endif  // SIOU_KERNEL_HPP_
