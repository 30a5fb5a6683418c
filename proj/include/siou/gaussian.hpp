#ifndef SIOU_GAUSSIAN_HPP_
#define SIOU_GAUSSIAN_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "siou/error.hpp"
#include "siou/random.hpp"

namespace siou {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Finite-dimensional Gaussian law.
template <typename Scalar = double>
struct GaussianSpec {
  Vector<Scalar> mean;
  Matrix<Scalar> cov;

  Eigen::Index dim() const noexcept { return mean.size(); }
};

/// Throws ConfigError unless cov is square, matches the mean and is symmetric
/// to 1e-12 relative.
template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  if (cov.rows() != cov.cols()) throw ConfigError("covariance matrix is not square");
  if (cov.size() == 0) return;
  const Scalar scale = cov.cwiseAbs().maxCoeff();
  const Scalar asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > Scalar(1e-12) * scale) {
    std::ostringstream os;
    os << "covariance matrix is not symmetric (max asymmetry " << asym << ")";
    throw ConfigError(os.str());
  }
}

template <typename Scalar>
void validate(const GaussianSpec<Scalar>& spec) {
  require_symmetric(spec.cov);
  if (spec.cov.rows() != spec.mean.size()) throw ConfigError("mean and covariance dimensions differ");
}

/// Diagonal jitter levels, as multiples of the largest diagonal entry.
inline constexpr std::array<double, 4> kJitterLadder{0.0, 1e-12, 1e-10, 1e-8};

enum class Definiteness {
  /// Exact zero pivots are accepted and give a zero column (degenerate components).
  semi,
  /// Every pivot must be strictly positive.
  strict,
};

template <typename Scalar>
struct CholeskyFactor {
  Matrix<Scalar> lower;
  /// Absolute jitter added to the diagonal.
  Scalar jitter = 0;
};

namespace detail {

template <typename Scalar>
struct CholeskyAttempt {
  bool ok = true;
  Scalar worst_pivot = 0;
};

template <typename Derived>
CholeskyAttempt<typename Derived::Scalar> try_cholesky(const Eigen::MatrixBase<Derived>& a,
                                                       typename Derived::Scalar jitter,
                                                       typename Derived::Scalar scale,
                                                       Definiteness definiteness,
                                                       Matrix<typename Derived::Scalar>& lower) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  const Scalar zero_pivot = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale * Scalar(n);
  const Scalar zero_residual = std::sqrt(zero_pivot * scale);

  CholeskyAttempt<Scalar> result;
  lower.setZero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar pivot = a(j, j) + jitter - lower.row(j).head(j).squaredNorm();
    if (pivot > zero_pivot) {
      const Scalar root = std::sqrt(pivot);
      lower(j, j) = root;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        lower(i, j) = (a(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j))) / root;
      }
      continue;
    }
    if (definiteness == Definiteness::semi && pivot >= -zero_pivot) {
      bool column_vanishes = true;
      for (Eigen::Index i = j + 1; i < n && column_vanishes; ++i) {
        const Scalar residual = a(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j));
        column_vanishes = std::abs(residual) <= zero_residual;
      }
      if (column_vanishes) continue;
    }
    result.ok = false;
    result.worst_pivot = std::min(result.worst_pivot, pivot);
    return result;
  }
  return result;
}

}  // namespace detail

/// Lower-triangular L with L L^T = cov + jitter I, trying each level of
/// kJitterLadder in turn. Throws NotPsdError reporting the most negative pivot
/// seen when the largest jitter still fails.
template <typename Derived>
CholeskyFactor<typename Derived::Scalar> factorize(const Eigen::MatrixBase<Derived>& cov,
                                                   Definiteness definiteness = Definiteness::semi) {
  using Scalar = typename Derived::Scalar;
  require_symmetric(cov);
  CholeskyFactor<Scalar> factor;
  if (cov.rows() == 0) return factor;

  const Scalar max_diag = cov.diagonal().maxCoeff();
  const Scalar scale = max_diag > Scalar(0) ? max_diag : Scalar(1);
  Scalar worst = 0;
  for (double level : kJitterLadder) {
    factor.jitter = Scalar(level) * std::max(max_diag, Scalar(0));
    const auto attempt = detail::try_cholesky(cov, factor.jitter, scale, definiteness, factor.lower);
    if (attempt.ok) return factor;
    worst = std::min(worst, attempt.worst_pivot);
  }
  std::ostringstream os;
  os << "matrix is not positive " << (definiteness == Definiteness::strict ? "definite" : "semidefinite")
     << " within the jitter ladder; most negative pivot " << worst;
  throw NotPsdError(os.str(), static_cast<double>(worst));
}

/// n i.i.d. draws, one per row: mean + L z with z standard normal.
template <typename Scalar>
Matrix<Scalar> sample(const GaussianSpec<Scalar>& spec, Eigen::Index n, const RngSeed& seed) {
  validate(spec);
  const auto factor = factorize(spec.cov);
  Engine engine = make_engine(seed);
  std::normal_distribution<Scalar> normal;

  const Eigen::Index d = spec.dim();
  Matrix<Scalar> draws(n, d);
  Vector<Scalar> z(d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(engine);
    draws.row(r) = (spec.mean + factor.lower.template triangularView<Eigen::Lower>() * z).transpose();
  }
  return draws;
}

/// Regression of a target block on an observed block.
template <typename Scalar>
struct SchurComplement {
  /// Sigma_ao Sigma_oo^{-1}, one row per target index.
  Matrix<Scalar> coefficients;
  /// Sigma_aa - Sigma_ao Sigma_oo^{-1} Sigma_oa.
  Matrix<Scalar> residual_cov;
};

template <typename Derived>
SchurComplement<typename Derived::Scalar> schur_complement(const Eigen::MatrixBase<Derived>& cov,
                                                           std::span<const Eigen::Index> target,
                                                           std::span<const Eigen::Index> observed) {
  using Scalar = typename Derived::Scalar;
  const auto na = static_cast<Eigen::Index>(target.size());
  const auto no = static_cast<Eigen::Index>(observed.size());
  Matrix<Scalar> aa(na, na), ao(na, no), oo(no, no);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) aa(i, j) = cov(target[i], target[j]);
    for (Eigen::Index j = 0; j < no; ++j) ao(i, j) = cov(target[i], observed[j]);
  }
  for (Eigen::Index i = 0; i < no; ++i) {
    for (Eigen::Index j = 0; j < no; ++j) oo(i, j) = cov(observed[i], observed[j]);
  }

  SchurComplement<Scalar> out;
  if (no == 0) {
    out.coefficients.setZero(na, 0);
    out.residual_cov = aa;
    return out;
  }
  const auto factor = factorize(oo, Definiteness::strict);
  const auto lower = factor.lower.template triangularView<Eigen::Lower>();
  // Sigma_oo^{-1} Sigma_oa via two triangular solves.
  Matrix<Scalar> solved = lower.solve(ao.transpose());
  lower.transpose().solveInPlace(solved);
  out.coefficients = solved.transpose();
  out.residual_cov = aa - out.coefficients * ao.transpose();
  out.residual_cov = Scalar(0.5) * (out.residual_cov + out.residual_cov.transpose()).eval();
  return out;
}

/// Law of the full vector given x_o = values. Observed entries become point
/// masses at their values (zero rows and columns in the covariance).
template <typename Scalar>
GaussianSpec<Scalar> conditional(const GaussianSpec<Scalar>& spec, std::span<const Eigen::Index> observed,
                                 std::span<const Scalar> values) {
  validate(spec);
  if (observed.size() != values.size()) throw ConfigError("observed indices and values differ in length");
  const Eigen::Index d = spec.dim();
  std::vector<bool> is_observed(static_cast<std::size_t>(d), false);
  for (Eigen::Index idx : observed) {
    if (idx < 0 || idx >= d) throw ConfigError("observed index out of range");
    if (is_observed[static_cast<std::size_t>(idx)]) throw ConfigError("observed index repeated");
    is_observed[static_cast<std::size_t>(idx)] = true;
  }
  std::vector<Eigen::Index> target;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!is_observed[static_cast<std::size_t>(i)]) target.push_back(i);
  }

  const auto schur = schur_complement(spec.cov, target, observed);
  Vector<Scalar> shift(static_cast<Eigen::Index>(observed.size()));
  for (std::size_t j = 0; j < observed.size(); ++j) {
    shift[static_cast<Eigen::Index>(j)] = values[j] - spec.mean[observed[j]];
  }
  const Vector<Scalar> target_mean = schur.coefficients * shift;

  GaussianSpec<Scalar> out{spec.mean, Matrix<Scalar>::Zero(d, d)};
  for (std::size_t j = 0; j < observed.size(); ++j) out.mean[observed[j]] = values[j];
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out.mean[target[i]] += target_mean[ii];
    for (std::size_t k = 0; k < target.size(); ++k) {
      out.cov(target[i], target[k]) = schur.residual_cov(ii, static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

}  // namespace siou

#endif  // SIOU_GAUSSIAN_HPP_
