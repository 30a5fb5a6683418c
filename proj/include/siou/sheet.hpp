#ifndef SIOU_SHEET_HPP_
#define SIOU_SHEET_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "siou/geometry.hpp"
#include "siou/kernel.hpp"
#include "siou/random.hpp"

namespace siou {

/// Regular grid on the box [lower, upper] used to discretize the Brownian
/// sheet. lower <= 0 < upper componentwise; lower truncates (-inf, t].
class GridSpec {
 public:
  GridSpec(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::size_t> steps);

  /// Cube [-truncation, upper]^N with the given cell width; the box edges must
  /// be multiples of the width (to 1e-9).
  static GridSpec uniform(Eigen::Index dim, double truncation, double upper, double width);

  Eigen::Index dim() const noexcept { return lower_.size(); }
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }
  const std::vector<std::size_t>& steps() const noexcept { return steps_; }

  Eigen::VectorXd widths() const;
  double cell_volume() const;
  std::size_t cell_count() const noexcept { return cell_count_; }
  /// Center of a cell in row-major order (last axis fastest).
  Eigen::VectorXd cell_center(std::size_t cell) const;
  /// Smallest distance from the lower corner to the origin, i.e. min_i -lower_i.
  double truncation() const { return (-lower_).minCoeff(); }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::vector<std::size_t> steps_;
  std::size_t cell_count_ = 0;
};

/// Independent Normal(0, cell volume) increments of the Brownian sheet.
struct SheetField {
  Eigen::VectorXd increments;
  GridSpec spec;
  RngSeed seed;
};

SheetField sheet_increments(const GridSpec& spec, const RngSeed& seed, std::uint64_t substream = 0);

enum class SheetModel {
  /// Y_t = e^{-<a,t>} [Y_0 + sigma * int over (-inf,t] \ (-inf,0] of e^{<a,u>} dW_u].
  started,
  /// Y_t = int over (-inf,t] of sigma e^{<a,u-t>} dW_u.
  stationary,
};

/// Cell weights w with Y_t = y0 e^{-<a,t>} + sigma * w . dW (started model) or
/// Y_t = sigma * w . dW (stationary model): w = e^{<a,u-t>} at cell centers u
/// inside the integration region, 0 elsewhere.
Eigen::VectorXd integrand_weights(const GridSpec& spec, const Eigen::VectorXd& alpha, const Corner& t,
                                  SheetModel model);

double integrate_mpou(const SheetField& field, const Eigen::VectorXd& alpha, double sigma, double y0,
                      const Corner& t);
double integrate_stationary(const SheetField& field, const Eigen::VectorXd& alpha, double sigma,
                            const Corner& t);

/// Conservative bound e^{-2 min_i alpha_i L} on the relative second-moment
/// error from truncating (-inf, t] at -L.
double truncation_bound(const Eigen::VectorXd& alpha, double L);

/// Smallest L with truncation_bound(alpha, L) <= target, rounded up to a
/// multiple of `width`.
double truncation_for(const Eigen::VectorXd& alpha, double target, double width);

/// Closed-form covariances of the continuum models.
double started_sheet_covariance(const Eigen::VectorXd& alpha, double sigma, const Corner& s, const Corner& t);
double stationary_sheet_covariance(const Eigen::VectorXd& alpha, double sigma, const Corner& s,
                                   const Corner& t);

/// Exact covariance of the discretized integrals (deterministic, no sampling).
double discretized_covariance(const GridSpec& spec, const Eigen::VectorXd& alpha, double sigma,
                              const Corner& s, const Corner& t, SheetModel model);

/// Kernel of the set-indexed process the started model reproduces: lambda = 1,
/// measure m_alpha and sigma~^2 = sigma^2 2^{1-N} / prod alpha.
KernelParams equivalent_kernel(const Eigen::VectorXd& alpha, double sigma);

/// Replicates x points matrix of Y at the given points, one independent sheet
/// per replicate (substream r).
Eigen::MatrixXd simulate_sheet(const GridSpec& spec, const Eigen::VectorXd& alpha, double sigma,
                               SheetModel model, double y0, std::span<const Corner> points,
                               std::size_t replicates, const RngSeed& seed);

}  // namespace siou

#endif  // SIOU_SHEET_HPP_
