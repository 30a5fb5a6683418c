#ifndef SIOU_SIMULATOR_HPP_
#define SIOU_SIMULATOR_HPP_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "siou/gaussian.hpp"
#include "siou/geometry.hpp"
#include "siou/kernel.hpp"
#include "siou/random.hpp"

namespace siou {

/// Law of the value at the origin.
struct DiracLaw {
  double x0 = 0.0;
};
struct NormalLaw {
  double mu = 0.0;
  double var = 0.0;
};
/// Uniform resampling with replacement from a list of values.
struct EmpiricalLaw {
  std::vector<double> values;
};

class InitialLaw {
 public:
  using Variant = std::variant<DiracLaw, NormalLaw, EmpiricalLaw>;

  InitialLaw(DiracLaw law) : law_(law) {}
  InitialLaw(NormalLaw law);
  InitialLaw(EmpiricalLaw law);

  /// Normal(0, sigma^2 / 2 lambda), which makes the process stationary.
  static InitialLaw stationary(const KernelParams& p) { return NormalLaw{0.0, p.stationary_variance()}; }

  const Variant& law() const noexcept { return law_; }
  double draw(Engine& engine) const;

 private:
  Variant law_;
};

/// One sequential step: sample corner `index` given the earlier corners listed
/// in `frontier_index`.
struct PlanStep {
  std::size_t index = 0;
  Increment increment;
  Frontier frontier;
  std::vector<std::size_t> frontier_index;
};

struct Plan {
  /// Min-closed, ordered by a linear extension, origin first.
  std::vector<Corner> corners;
  /// steps[i - 1] samples corners[i].
  std::vector<PlanStep> steps;
};

/// Min-closes the corners and builds the increment C_i = A_i \ (A_0 ∪ ... ∪ A_{i-1})
/// for each later corner. Throws PlanningError if a frontier corner has not been
/// sampled earlier in the order.
Plan make_plan(std::span<const Corner> corners, LinearExtension order = LinearExtension::by_sum);

struct SamplePath {
  std::vector<Corner> corners;
  /// replicates x corners.
  Eigen::MatrixXd values;
  RngSeed seed;
  KernelParams params;
  InitialLaw initial;
};

/// Draws X at the origin from the initial law, then every later corner from the
/// Gaussian transition kernel given its frontier. Replicate r uses substream r.
SamplePath simulate(const Plan& plan, const KernelParams& params, const InitialLaw& initial,
                    std::size_t replicates, const RngSeed& seed);

/// Joint Gaussian law of (X_u) for a Dirac or Normal initial law.
GaussianSpec<double> exact_law(std::span<const Corner> corners, const KernelParams& params,
                               const InitialLaw& initial);

/// One-shot sampling from exact_law over the corners as given.
SamplePath simulate_exact(std::span<const Corner> corners, const KernelParams& params,
                          const InitialLaw& initial, std::size_t replicates, const RngSeed& seed);

}  // namespace siou

#endif  // SIOU_SIMULATOR_HPP_
