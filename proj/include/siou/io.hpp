#ifndef SIOU_IO_HPP_
#define SIOU_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "siou/geometry.hpp"
#include "siou/kernel.hpp"
#include "siou/sheet.hpp"
#include "siou/simulator.hpp"
#include "siou/verify.hpp"

namespace siou {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Header row, then one row per matrix row. Fields are formatted with format_double.
void write_csv(std::ostream& out, std::span<const std::string> header, const Eigen::MatrixXd& values);

/// "(1,0.5)" style label of a corner, used as a CSV column name.
std::string corner_label(const Corner& c);

Json to_json(const Corner& c);
Json to_json(const UnionSet& u);
/// Array of {corner, sign, coefficient}.
Json to_json(const Frontier& f);
/// {weights: [{corner, weight}], variance}.
Json to_json(const TransitionParams& tp);
Json to_json(const CheckReport& r);
Json to_json(const MeasureSpec& m);
Json to_json(const InitialLaw& law);
Json to_json(const Eigen::MatrixXd& m);

Corner corner_from_json(const Json& j);
std::vector<Corner> corners_from_json(const Json& j);
MeasureSpec measure_from_json(const Json& j);
InitialLaw initial_law_from_json(const Json& j);

/// "1,2" -> corner (1, 2).
Corner parse_corner(const std::string& text);
/// "1,2;2,1" -> corners (1, 2) and (2, 1). Empty text yields no corners.
std::vector<Corner> parse_corner_list(const std::string& text);

struct SheetConfig {
  Eigen::VectorXd alpha;
  double sigma = 1.0;
  double y0 = 0.0;
  SheetModel model = SheetModel::started;
  double width = 0.05;
  double upper = 1.0;
  /// Explicit truncation length; when absent it is chosen from truncation_target.
  std::optional<double> truncation;
  double truncation_target = 1e-3;
  std::vector<Corner> points;

  GridSpec grid() const;
};

/// Fully resolved run configuration.
struct RunConfig {
  Eigen::Index dimension = 0;
  MeasureSpec measure = MeasureSpec::lebesgue();
  double lambda = 1.0;
  double sigma = 1.0;
  std::vector<Corner> corners;
  InitialLaw initial = DiracLaw{0.0};
  std::size_t replicates = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  /// "markov" (sequential sampler) or "exact" (joint Gaussian law).
  std::string method = "markov";
  LinearExtension extension = LinearExtension::by_sum;
  std::string csv_path;
  std::string json_path;
  std::optional<SheetConfig> sheet;

  KernelParams kernel() const { return KernelParams(lambda, sigma, measure); }
  RngSeed rng_seed() const;
};

/// Parses and validates a run config. Missing fields keep their defaults; the
/// dimension is inferred from the corners or sheet alpha when not given.
/// Throws ConfigError on malformed input.
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::string& path);

/// Re-checks the invariants after flags were applied: coordinate lengths equal
/// the dimension, replicates >= 1.
void validate(const RunConfig& config);

Json to_json(const RunConfig& config);

}  // namespace siou

#endif  // SIOU_IO_HPP_
