#include "siou/sheet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "siou/error.hpp"
#include "siou/parallel.hpp"

namespace siou {

namespace {

void require_alpha(const Eigen::VectorXd& alpha, Eigen::Index dim) {
  if (alpha.size() != dim) throw ConfigError("alpha dimension does not match the grid");
  if (!(alpha.array() > 0.0).all()) throw ConfigError("every alpha_i must be > 0");
}

void require_in_grid(const GridSpec& spec, const Corner& t) {
  if (t.dim() != spec.dim()) throw GeometryError("point dimension does not match the grid");
  if (!(t.coords().array() <= spec.upper().array() + kGeometryTolerance).all()) {
    std::ostringstream os;
    os << "point (" << t.coords().transpose() << ") lies outside the grid upper bound ("
       << spec.upper().transpose() << ")";
    throw RangeError(os.str());
  }
}

constexpr std::size_t kReplicateBlock = 256;

}  // namespace

GridSpec::GridSpec(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::size_t> steps)
    : lower_(std::move(lower)), upper_(std::move(upper)), steps_(std::move(steps)) {
  if (lower_.size() == 0 || upper_.size() != lower_.size() ||
      steps_.size() != static_cast<std::size_t>(lower_.size())) {
    throw ConfigError("grid lower, upper and steps must have the same nonzero length");
  }
  if (!(lower_.array() <= 0.0).all() || !(upper_.array() > 0.0).all()) {
    throw ConfigError("grid must satisfy lower <= 0 < upper in every coordinate");
  }
  cell_count_ = 1;
  for (std::size_t s : steps_) {
    if (s == 0) throw ConfigError("invalid grid: zero-volume cells (a step count is 0)");
    cell_count_ *= s;
  }
  if (!(cell_volume() > 0.0)) throw ConfigError("invalid grid: zero-volume cells");
}

GridSpec GridSpec::uniform(Eigen::Index dim, double truncation, double upper, double width) {
  if (!(width > 0.0) || !(truncation >= 0.0) || !(upper > 0.0)) {
    throw ConfigError("uniform grid needs width > 0, truncation >= 0, upper > 0");
  }
  const double cells = (upper + truncation) / width;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells) ||
      std::abs(truncation / width - std::round(truncation / width)) > 1e-9 * std::max(1.0, cells)) {
    throw ConfigError("grid edges must be multiples of the cell width");
  }
  return GridSpec(Eigen::VectorXd::Constant(dim, -truncation), Eigen::VectorXd::Constant(dim, upper),
                  std::vector<std::size_t>(static_cast<std::size_t>(dim), static_cast<std::size_t>(rounded)));
}

Eigen::VectorXd GridSpec::widths() const {
  Eigen::VectorXd w(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    w[i] = (upper_[i] - lower_[i]) / static_cast<double>(steps_[static_cast<std::size_t>(i)]);
  }
  return w;
}

double GridSpec::cell_volume() const { return widths().prod(); }

Eigen::VectorXd GridSpec::cell_center(std::size_t cell) const {
  const Eigen::VectorXd w = widths();
  Eigen::VectorXd center(dim());
  for (Eigen::Index i = dim() - 1; i >= 0; --i) {
    const std::size_t n = steps_[static_cast<std::size_t>(i)];
    center[i] = lower_[i] + (static_cast<double>(cell % n) + 0.5) * w[i];
    cell /= n;
  }
  return center;
}

SheetField sheet_increments(const GridSpec& spec, const RngSeed& seed, std::uint64_t substream) {
  Engine engine = make_engine(seed, substream);
  StandardNormal normal;
  const double sd = std::sqrt(spec.cell_volume());
  Eigen::VectorXd increments(static_cast<Eigen::Index>(spec.cell_count()));
  for (Eigen::Index c = 0; c < increments.size(); ++c) increments[c] = sd * normal(engine);
  return SheetField{std::move(increments), spec, seed};
}

Eigen::VectorXd integrand_weights(const GridSpec& spec, const Eigen::VectorXd& alpha, const Corner& t,
                                  SheetModel model) {
  require_alpha(alpha, spec.dim());
  require_in_grid(spec, t);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.cell_count()));
  for (std::size_t c = 0; c < spec.cell_count(); ++c) {
    const Eigen::VectorXd u = spec.cell_center(c);
    if (!(u.array() <= t.coords().array()).all()) continue;
    if (model == SheetModel::started && (u.array() <= 0.0).all()) continue;
    w[static_cast<Eigen::Index>(c)] = std::exp(alpha.dot(u - t.coords()));
  }
  return w;
}

double integrate_mpou(const SheetField& field, const Eigen::VectorXd& alpha, double sigma, double y0,
                      const Corner& t) {
  const Eigen::VectorXd w = integrand_weights(field.spec, alpha, t, SheetModel::started);
  return y0 * std::exp(-alpha.dot(t.coords())) + sigma * w.dot(field.increments);
}

double integrate_stationary(const SheetField& field, const Eigen::VectorXd& alpha, double sigma,
                            const Corner& t) {
  return sigma * integrand_weights(field.spec, alpha, t, SheetModel::stationary).dot(field.increments);
}

double truncation_bound(const Eigen::VectorXd& alpha, double L) {
  if (!(L >= 0.0)) throw ConfigError("truncation length must be >= 0");
  if (alpha.size() == 0 || !(alpha.array() > 0.0).all()) throw ConfigError("every alpha_i must be > 0");
  return std::exp(-2.0 * alpha.minCoeff() * L);
}

double truncation_for(const Eigen::VectorXd& alpha, double target, double width) {
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("truncation target must lie in (0, 1)");
  const double exact = -std::log(target) / (2.0 * alpha.minCoeff());
  return std::ceil(exact / width - 1e-9) * width;
}

double started_sheet_covariance(const Eigen::VectorXd& alpha, double sigma, const Corner& s,
                                const Corner& t) {
  const auto n = static_cast<double>(alpha.size());
  const double scale = sigma * sigma / (std::pow(2.0, n) * alpha.prod());
  const Eigen::VectorXd both = s.coords().cwiseMin(t.coords());
  return scale * std::exp(-alpha.dot(s.coords() + t.coords())) * std::expm1(2.0 * alpha.dot(both));
}

double stationary_sheet_covariance(const Eigen::VectorXd& alpha, double sigma, const Corner& s,
                                   const Corner& t) {
  const auto n = static_cast<double>(alpha.size());
  const double scale = sigma * sigma / (std::pow(2.0, n) * alpha.prod());
  return scale * std::exp(-alpha.dot((s.coords() - t.coords()).cwiseAbs()));
}

double discretized_covariance(const GridSpec& spec, const Eigen::VectorXd& alpha, double sigma,
                              const Corner& s, const Corner& t, SheetModel model) {
  const Eigen::VectorXd ws = integrand_weights(spec, alpha, s, model);
  const Eigen::VectorXd wt = integrand_weights(spec, alpha, t, model);
  return sigma * sigma * spec.cell_volume() * ws.dot(wt);
}

KernelParams equivalent_kernel(const Eigen::VectorXd& alpha, double sigma) {
  const auto n = static_cast<double>(alpha.size());
  const double variance = sigma * sigma * std::pow(2.0, 1.0 - n) / alpha.prod();
  return KernelParams(1.0, std::sqrt(variance), MeasureSpec::axis(alpha));
}

Eigen::MatrixXd simulate_sheet(const GridSpec& spec, const Eigen::VectorXd& alpha, double sigma,
                               SheetModel model, double y0, std::span<const Corner> points,
                               std::size_t replicates, const RngSeed& seed) {
  if (replicates == 0) throw ConfigError("replicates must be >= 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  const auto cells = static_cast<Eigen::Index>(spec.cell_count());
  const auto npts = static_cast<Eigen::Index>(points.size());

  Eigen::MatrixXd weights(cells, npts);
  Eigen::RowVectorXd offset = Eigen::RowVectorXd::Zero(npts);
  for (Eigen::Index j = 0; j < npts; ++j) {
    const Corner& t = points[static_cast<std::size_t>(j)];
    weights.col(j) = sigma * integrand_weights(spec, alpha, t, model);
    if (model == SheetModel::started) offset[j] = y0 * std::exp(-alpha.dot(t.coords()));
  }

  Eigen::MatrixXd values(static_cast<Eigen::Index>(replicates), npts);
  const std::size_t blocks = (replicates + kReplicateBlock - 1) / kReplicateBlock;
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd field;
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t first = b * kReplicateBlock;
      const std::size_t count = std::min(kReplicateBlock, replicates - first);
      field.resize(static_cast<Eigen::Index>(count), cells);
      for (std::size_t r = 0; r < count; ++r) {
        field.row(static_cast<Eigen::Index>(r)) = sheet_increments(spec, seed, first + r).increments.transpose();
      }
      values.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) =
          (field * weights).rowwise() + offset;
    }
  });
  return values;
}

}  // namespace siou
