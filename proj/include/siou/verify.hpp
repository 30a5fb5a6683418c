#ifndef SIOU_VERIFY_HPP_
#define SIOU_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "siou/gaussian.hpp"
#include "siou/geometry.hpp"
#include "siou/kernel.hpp"
#include "siou/random.hpp"
#include "siou/sheet.hpp"
#include "siou/simulator.hpp"

namespace siou {

/// Outcome of one check. passed iff statistic <= tolerance (a NaN statistic fails).
struct CheckReport {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double tolerance = 0.0;
  std::string details;
};

CheckReport make_report(std::string name, double statistic, double tolerance, std::string details = {});

/// Covariance function under test. The deterministic checks compare it with the
/// closed-form kernel formulas, so a corrupted model must make them fail.
using CovarianceModel = std::function<double(const KernelParams&, const Corner&, const Corner&)>;

/// cov_stationary.
CovarianceModel stationary_model();
/// Negative-control fixture: (sigma^2 / 2 lambda) e^{+lambda m(U Δ V)}.
CovarianceModel sign_flipped_model();

/// Monotone piecewise-linear path in R^N_+ from the origin through waypoints,
/// parameterized by [0, segments()].
class FlowSpec {
 public:
  /// Throws ConfigError unless waypoints start at the origin and are nondecreasing.
  explicit FlowSpec(std::vector<Corner> waypoints);

  const std::vector<Corner>& waypoints() const noexcept { return waypoints_; }
  double segments() const noexcept { return static_cast<double>(waypoints_.size() - 1); }
  Corner at(double param) const;

 private:
  std::vector<Corner> waypoints_;
};

/// Random corners on the 0.25 grid with coordinates in [0.25, 2].
std::vector<Corner> random_corners(Engine& engine, Eigen::Index dim, std::size_t count);
/// Random increment: top corner on the 0.25 grid in [0.25, 2]^N and 1..max_b
/// corners on the same grid below it.
Increment random_increment(Engine& engine, Eigen::Index dim, std::size_t max_b);

/// (-min eigenvalue / trace)_+ of a symmetric matrix.
double psd_violation(const Eigen::MatrixXd& gram);

Eigen::MatrixXd gram_matrix(const CovarianceModel& model, const KernelParams& p,
                            std::span<const Corner> corners);

/// Gram matrices of random corner sets (size <= 12, N <= 3) under Lebesgue and
/// random axis measures with p's lambda and sigma.
CheckReport check_psd(const KernelParams& p, std::size_t trials, const RngSeed& seed,
                      const CovarianceModel& model = stationary_model());

/// Closed-form transition weights and variance against the Schur complement of
/// the model's Gram matrix of (X_A, frontier). Random increments in dimension dim.
CheckReport check_schur(const KernelParams& p, Eigen::Index dim, std::size_t trials, const RngSeed& seed,
                        const CovarianceModel& model = stationary_model());

/// I_U = Cov(X_A - sum_i w_i X_{C'_i}, X_U) over random increments and corners U
/// with [0,U] ∩ C empty; corners violating that are skipped and counted.
CheckReport check_markov_orthogonality(const KernelParams& p, Eigen::Index dim, std::size_t trials,
                                       const RngSeed& seed,
                                       const CovarianceModel& model = stationary_model());

/// One-parameter case (N = 1, Lebesgue): the transition density and the model's
/// two-point conditional law against the classical OU kernel on a grid.
CheckReport check_one_dim_reduction(const KernelParams& p, const CovarianceModel& model = stationary_model());

/// L2 gaps E|X_{U_n} - X_U|^2 computed from the model along a sequence.
std::vector<double> l2_gaps(const KernelParams& p, const CovarianceModel& model,
                            std::span<const Corner> sequence, const Corner& limit);

/// Inner and outer L2 continuity at the midpoint of each flow, approached
/// geometrically (40 halvings). The statistic is the worst of the final gap, the
/// deviation of every gap from (sigma^2/lambda)(1 - e^{-lambda m(U Δ U_n)}), and
/// any negative gap.
CheckReport check_continuity(const KernelParams& p, std::span<const FlowSpec> flows, double tolerance,
                             const CovarianceModel& model = stationary_model());

/// Corner on `axis` with measure `target`; other coordinates are 1 (Lebesgue) or
/// 0 (axis measure).
Corner matched_corner(const MeasureSpec& measure, Eigen::Index dim, Eigen::Index axis, double target);

/// Gram matrices of (X_{U_i}) and (X_{A_i}) must agree (and be valid
/// covariances) when m(U_i \ V) = m(A_i). Throws ConfigError if the sequences are
/// not increasing or the measures do not match to 1e-9.
CheckReport check_stationarity(const KernelParams& p, const Corner& v, std::span<const Corner> us,
                               std::span<const Corner> as, const CovarianceModel& model = stationary_model());

/// Stationarity with U_i growing along the first axis beyond a random V and A_i
/// solved along the last axis from the origin.
CheckReport check_stationarity_constructed(const KernelParams& p, Eigen::Index dim, const RngSeed& seed,
                                           const CovarianceModel& model = stationary_model());

/// Model covariance along the flow against (sigma^2/2 lambda) e^{-lambda |theta(t) - theta(s)|}
/// with theta = m o f.
CheckReport check_flow_projection(const KernelParams& p, const FlowSpec& flow,
                                  const CovarianceModel& model = stationary_model());

/// Standard flows used by the suite: diagonal, axis staircase and one random flow.
std::vector<FlowSpec> standard_flows(Eigen::Index dim, const RngSeed& seed);

/// Max |z| over mean and covariance entries of the sample against a Gaussian
/// law; covariance standard errors from the Gaussian fourth-moment formula.
/// Requires at least 1000 replicates.
CheckReport check_mc_moments(const Eigen::MatrixXd& values, const GaussianSpec<double>& theory,
                             double tolerance = 5.0);
CheckReport check_mc_moments(const SamplePath& observed, const GaussianSpec<double>& theory,
                             double tolerance = 5.0);

/// Two-sample version: max |z| between the empirical moments of two samples of
/// the same columns.
CheckReport check_mc_agreement(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tolerance = 5.0);

/// Reorders the columns of `path` to match `corners`.
Eigen::MatrixXd align_columns(const SamplePath& path, std::span<const Corner> corners);

/// Monte Carlo comparison of the Brownian-sheet integrals with their
/// set-indexed counterparts over a list of (s, t) pairs.
struct SheetExperiment {
  Eigen::VectorXd alpha;
  double sigma = 1.0;
  double y0 = 0.0;
  SheetModel model = SheetModel::started;
  double width = 0.05;
  /// Target for truncation_bound; picks the truncation length L.
  double truncation_target = 1e-3;
  /// Upper edge of the grid in every coordinate.
  double upper = 1.0;
  std::vector<std::pair<Corner, Corner>> pairs;
  std::size_t replicates = 20000;
  RngSeed seed;
};

struct SheetPairResult {
  Corner s;
  Corner t;
  double empirical = 0.0;
  /// cov_dirac under equivalent_kernel (started model) or the stationary sheet
  /// covariance.
  double theory = 0.0;
  /// Exact covariance of the discretized integrals.
  double discretized = 0.0;
  double standard_error = 0.0;
};

struct SheetComparison {
  GridSpec grid;
  std::vector<Corner> points;
  Eigen::MatrixXd values;
  std::vector<SheetPairResult> pairs;
};

SheetComparison run_sheet_experiment(const SheetExperiment& experiment);

/// Passes when every |empirical - theory| <= 5 standard errors + allowance.
/// The statistic is the largest excess over 5 standard errors.
CheckReport check_sheet_representation(const SheetComparison& comparison, double allowance);

struct SuiteOptions {
  std::uint64_t seed = 0;
  CovarianceModel model = stationary_model();
};

/// PSD, Schur, orthogonality, one-dimensional reduction, continuity,
/// stationarity and flow checks for lambda in {0.5, 1, 2}, sigma^2 in {1, 2},
/// both measures and N in {1, 2, 3}.
std::vector<CheckReport> deterministic_suite(const SuiteOptions& options);

/// Monte Carlo checks: Dirac-start and stationary laws, sampler agreement, order
/// independence, one-dimensional chain, and the sheet representation.
std::vector<CheckReport> mc_suite(std::uint64_t seed);

}  // namespace siou

#endif  // SIOU_VERIFY_HPP_
