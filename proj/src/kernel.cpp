#include "siou/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "siou/error.hpp"

namespace siou {

KernelParams::KernelParams(double lambda, double sigma, MeasureSpec measure)
    : lambda_(lambda), sigma_(sigma), measure_(std::move(measure)) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw KernelError("lambda must be a positive finite number");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) throw KernelError("sigma must be a positive finite number");
}

double TransitionParams::conditional_mean(std::span<const double> frontier_values) const {
  if (frontier_values.size() != weights.size()) {
    throw ConfigError("frontier value count does not match the transition weights");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) mean += weights[i].weight * frontier_values[i];
  return mean;
}

double cov_stationary(const KernelParams& p, const Corner& u, const Corner& v) {
  return p.stationary_variance() * std::exp(-p.lambda() * measure_symdiff(p.measure(), u, v));
}

double cov_dirac(const KernelParams& p, const Corner& u, const Corner& v) {
  const auto& m = p.measure();
  const double lam = p.lambda();
  return p.stationary_variance() *
         (std::exp(-lam * measure_symdiff(m, u, v)) -
          std::exp(-lam * (measure_rect(m, u) + measure_rect(m, v))));
}

double mean_dirac(const KernelParams& p, double x0, const Corner& u) {
  return x0 * std::exp(-p.lambda() * measure_rect(p.measure(), u));
}

TransitionParams transition_params(const KernelParams& p, const Increment& inc) {
  return transition_params(p, inc.a(), frontier(inc));
}

TransitionParams transition_params(const KernelParams& p, const Corner& a, const Frontier& f) {
  const double lam = p.lambda();
  const double ma = measure_rect(p.measure(), a);

  TransitionParams tp;
  tp.weights.reserve(f.size());
  // 1 - e^{-2 lam m(A)} sum_i c_i e^{2 lam m(C'_i)}, written with the
  // nonnegative gaps m(A) - m(C'_i) so nothing overflows.
  double explained = 0.0;
  for (const auto& e : f.entries) {
    const double gap = ma - measure_rect(p.measure(), e.corner);
    tp.weights.push_back({e.corner, e.coefficient * std::exp(-lam * gap)});
    explained += e.coefficient * std::exp(-2.0 * lam * gap);
  }
  const double variance = p.stationary_variance() * (1.0 - explained);
  if (variance < -kVarianceSlack) {
    std::ostringstream os;
    os << "transition variance " << variance << " is negative";
    throw KernelError(os.str());
  }
  tp.variance = variance < 0.0 ? 0.0 : variance;
  return tp;
}

double transition_density(const TransitionParams& tp, std::span<const double> frontier_values,
                          double y) {
  if (!(tp.variance > 0.0)) {
    throw KernelError("transition variance is zero; the conditional law is a point mass");
  }
  const double r = y - tp.conditional_mean(frontier_values);
  return std::exp(-0.5 * r * r / tp.variance) / std::sqrt(2.0 * std::numbers::pi * tp.variance);
}

}  // namespace siou
