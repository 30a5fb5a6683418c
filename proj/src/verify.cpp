#include "siou/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "siou/error.hpp"
#include "siou/measure.hpp"

namespace siou {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double grid_value(Engine& engine, int lo, int hi) {
  return 0.25 * std::uniform_int_distribution<int>(lo, hi)(engine);
}

std::string describe(const KernelParams& p) {
  std::ostringstream os;
  os << "lambda=" << p.lambda() << " sigma2=" << p.sigma() * p.sigma() << " measure=";
  if (p.measure().kind() == MeasureSpec::Kind::lebesgue) {
    os << "lebesgue";
  } else {
    const auto& alpha = p.measure().alpha();
    os << "axis(";
    for (Eigen::Index i = 0; i < alpha.size(); ++i) os << (i > 0 ? "," : "") << alpha[i];
    os << ")";
  }
  return os.str();
}

void require_dim(const KernelParams& p, Eigen::Index dim) {
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (p.measure().kind() == MeasureSpec::Kind::axis && p.measure().alpha().size() != dim) {
    throw ConfigError("axis measure dimension does not match the requested dimension");
  }
}

// Standard error convention: a zero standard error counts as z = 0 when the
// difference is rounding-sized and as an infinite z otherwise.
double z_score(double diff, double se, double scale) {
  if (se > 0.0) return std::abs(diff) / se;
  return std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(scale)) ? 0.0 : kInf;
}

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Moments empirical_moments(const Eigen::MatrixXd& values) {
  const auto n = static_cast<double>(values.rows());
  Moments m;
  m.mean = values.colwise().mean().transpose();
  const Eigen::MatrixXd centered = values.rowwise() - m.mean.transpose();
  m.cov = centered.transpose() * centered / (n - 1.0);
  return m;
}

struct WorstZ {
  double z = 0.0;
  std::string where;

  void update(double candidate, const std::string& label) {
    if (candidate > z || std::isnan(candidate)) {
      z = candidate;
      where = label;
    }
  }
};

std::string entry_label(const char* kind, Eigen::Index i, Eigen::Index j = -1) {
  std::ostringstream os;
  os << kind << "[" << i;
  if (j >= 0) os << "," << j;
  os << "]";
  return os.str();
}

}  // namespace

CheckReport make_report(std::string name, double statistic, double tolerance, std::string details) {
  CheckReport r{std::move(name), false, statistic, tolerance, std::move(details)};
  r.passed = statistic <= tolerance;
  return r;
}

CovarianceModel stationary_model() {
  return [](const KernelParams& p, const Corner& u, const Corner& v) { return cov_stationary(p, u, v); };
}

CovarianceModel sign_flipped_model() {
  return [](const KernelParams& p, const Corner& u, const Corner& v) {
    return p.stationary_variance() * std::exp(p.lambda() * measure_symdiff(p.measure(), u, v));
  };
}

FlowSpec::FlowSpec(std::vector<Corner> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) throw ConfigError("a flow needs at least two waypoints");
  require_dimension(waypoints_, waypoints_.front().dim());
  if (!waypoints_.front().is_origin()) throw ConfigError("a flow must start at the origin");
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (!leq(waypoints_[i - 1], waypoints_[i])) throw ConfigError("flow waypoints must be nondecreasing");
  }
}

Corner FlowSpec::at(double param) const {
  const double clamped = std::clamp(param, 0.0, segments());
  auto k = static_cast<std::size_t>(std::floor(clamped));
  if (k >= waypoints_.size() - 1) k = waypoints_.size() - 2;
  const double frac = clamped - static_cast<double>(k);
  const Eigen::VectorXd& from = waypoints_[k].coords();
  const Eigen::VectorXd& to = waypoints_[k + 1].coords();
  return Corner(((1.0 - frac) * from + frac * to).cwiseMax(0.0));
}

std::vector<Corner> random_corners(Engine& engine, Eigen::Index dim, std::size_t count) {
  std::vector<Corner> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd c(dim);
    for (Eigen::Index k = 0; k < dim; ++k) c[k] = grid_value(engine, 1, 8);
    out.emplace_back(std::move(c));
  }
  return out;
}

Increment random_increment(Engine& engine, Eigen::Index dim, std::size_t max_b) {
  Eigen::VectorXi top(dim);
  for (Eigen::Index k = 0; k < dim; ++k) top[k] = std::uniform_int_distribution<int>(1, 8)(engine);
  const auto count = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, max_b))(engine);
  std::vector<Corner> b;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd c(dim);
    for (Eigen::Index k = 0; k < dim; ++k) c[k] = grid_value(engine, 1, top[k]);
    b.emplace_back(std::move(c));
  }
  return Increment(Corner(0.25 * top.cast<double>()), b);
}

double psd_violation(const Eigen::MatrixXd& gram) {
  if (gram.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const double trace = gram.trace();
  const double min_eig = solver.eigenvalues().minCoeff();
  if (!(trace > 0.0)) return min_eig < 0.0 ? kInf : 0.0;
  return std::max(0.0, -min_eig / trace);
}

Eigen::MatrixXd gram_matrix(const CovarianceModel& model, const KernelParams& p,
                            std::span<const Corner> corners) {
  const auto n = static_cast<Eigen::Index>(corners.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = model(p, corners[static_cast<std::size_t>(i)], corners[static_cast<std::size_t>(j)]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

CheckReport check_psd(const KernelParams& p, std::size_t trials, const RngSeed& seed,
                      const CovarianceModel& model) {
  if (trials == 0) throw ConfigError("trials must be >= 1");
  Engine engine = make_engine(seed);
  double worst = 0.0;
  std::size_t worst_trial = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto dim = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(1, 3)(engine));
    const auto count = std::uniform_int_distribution<std::size_t>(1, 12)(engine);
    MeasureSpec measure = MeasureSpec::lebesgue();
    if (trial % 2 == 1) {
      Eigen::VectorXd alpha(dim);
      for (Eigen::Index k = 0; k < dim; ++k) alpha[k] = std::uniform_real_distribution<double>(0.2, 3.0)(engine);
      measure = MeasureSpec::axis(alpha);
    }
    const KernelParams trial_params(p.lambda(), p.sigma(), measure);
    const auto corners = random_corners(engine, dim, count);
    const double violation = psd_violation(gram_matrix(model, trial_params, corners));
    if (violation > worst || std::isnan(violation)) {
      worst = violation;
      worst_trial = trial;
    }
  }
  std::ostringstream details;
  details << trials << " random Gram matrices (N<=3, <=12 corners, both measures); worst trial " << worst_trial;
  return make_report("psd " + describe(p), worst, 1e-10, details.str());
}

CheckReport check_schur(const KernelParams& p, Eigen::Index dim, std::size_t trials, const RngSeed& seed,
                        const CovarianceModel& model) {
  if (trials == 0) throw ConfigError("trials must be >= 1");
  require_dim(p, dim);
  Engine engine = make_engine(seed);
  double worst = 0.0;
  std::string note;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Increment inc = random_increment(engine, dim, 5);
    const Frontier f = frontier(inc);
    const TransitionParams tp = transition_params(p, inc.a(), f);

    std::vector<Corner> corners{inc.a()};
    std::vector<Eigen::Index> observed;
    for (const auto& e : f.entries) {
      observed.push_back(static_cast<Eigen::Index>(corners.size()));
      corners.push_back(e.corner);
    }
    const std::vector<Eigen::Index> target{0};
    double diff = 0.0;
    try {
      const auto schur = schur_complement(gram_matrix(model, p, corners), target, observed);
      for (std::size_t i = 0; i < tp.weights.size(); ++i) {
        diff = std::max(diff, std::abs(schur.coefficients(0, static_cast<Eigen::Index>(i)) - tp.weights[i].weight));
      }
      diff = std::max(diff, std::abs(schur.residual_cov(0, 0) - tp.variance));
    } catch (const NotPsdError& e) {
      diff = kInf;
      note = std::string("; frontier block not positive definite: ") + e.what();
    }
    if (diff > worst || std::isnan(diff)) worst = diff;
  }
  std::ostringstream details;
  details << trials << " random increments, N=" << dim << ", <=5 b-corners" << note;
  std::ostringstream name;
  name << "schur " << describe(p) << " N=" << dim;
  return make_report(name.str(), worst, 1e-8, details.str());
}

CheckReport check_markov_orthogonality(const KernelParams& p, Eigen::Index dim, std::size_t trials,
                                       const RngSeed& seed, const CovarianceModel& model) {
  if (trials == 0) throw ConfigError("trials must be >= 1");
  require_dim(p, dim);
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  double worst = 0.0;
  for (std::size_t attempt = 0; evaluated < trials && attempt < 10 * trials; ++attempt) {
    const Increment inc = random_increment(engine, dim, 5);
    const TransitionParams tp = transition_params(p, inc);

    Eigen::VectorXd u(dim);
    if (unit(engine) < 0.8) {
      const auto& corners = inc.b().corners();
      const auto pick = std::uniform_int_distribution<std::size_t>(0, corners.size() - 1)(engine);
      for (Eigen::Index k = 0; k < dim; ++k) u[k] = unit(engine) * corners[pick][k];
    } else {
      for (Eigen::Index k = 0; k < dim; ++k) u[k] = unit(engine) * (inc.a()[k] + 0.5);
    }
    const Corner U(u);
    // [0,U] ∩ C is empty iff [0,U] ∩ [0,A] lies in B, i.e. under one b corner.
    if (!inc.b().covers(meet(U, inc.a()))) {
      ++skipped;
      continue;
    }
    ++evaluated;
    double residual = model(p, inc.a(), U);
    for (const auto& w : tp.weights) residual -= w.weight * model(p, w.corner, U);
    const double value = std::abs(residual);
    if (value > worst || std::isnan(value)) worst = value;
  }
  std::ostringstream details;
  details << "evaluated=" << evaluated << " skipped=" << skipped << " (precondition [0,U] ∩ C = empty)";
  std::ostringstream name;
  name << "orthogonality " << describe(p) << " N=" << dim;
  return make_report(name.str(), worst, 1e-9 * p.stationary_variance(), details.str());
}

CheckReport check_one_dim_reduction(const KernelParams& p, const CovarianceModel& model) {
  const KernelParams line(p.lambda(), p.sigma(), MeasureSpec::lebesgue());
  const double lam = p.lambda();
  const double sigma2 = p.sigma() * p.sigma();

  double worst = 0.0;
  const std::vector<double> starts{0.0, 0.25, 0.5, 1.0, 1.75};
  const std::vector<double> elapsed{0.1, 0.5, 1.0, 2.0};
  const std::vector<double> xs{-2.0, -0.5, 0.0, 1.0, 2.5};
  const std::vector<double> ys{-3.0, -1.0, 0.0, 0.4, 1.5, 3.0};
  for (double s : starts) {
    for (double dt : elapsed) {
      const double t = s + dt;
      const Corner cs{s};
      const Corner ct{t};
      const std::vector<Corner> b{cs};
      const TransitionParams tp = transition_params(line, Increment(ct, b));

      // Classical OU transition over elapsed time dt.
      const double classical_weight = std::exp(-lam * dt);
      const double classical_var = sigma2 / (2.0 * lam) * (1.0 - std::exp(-2.0 * lam * dt));
      worst = std::max(worst, std::abs(tp.weights.front().weight - classical_weight));
      worst = std::max(worst, std::abs(tp.variance - classical_var));
      for (double x : xs) {
        for (double y : ys) {
          const double r = y - x * classical_weight;
          const double classical =
              std::exp(-r * r / (2.0 * classical_var)) / (std::sqrt(classical_var) * std::sqrt(2.0 * std::numbers::pi));
          const std::vector<double> xv{x};
          worst = std::max(worst, std::abs(transition_density(tp, xv, y) - classical));
        }
      }

      const std::vector<Corner> pair{ct, cs};
      const std::vector<Eigen::Index> target{0};
      const std::vector<Eigen::Index> observed{1};
      try {
        const auto schur = schur_complement(gram_matrix(model, line, pair), target, observed);
        worst = std::max(worst, std::abs(schur.coefficients(0, 0) - classical_weight));
        worst = std::max(worst, std::abs(schur.residual_cov(0, 0) - classical_var));
      } catch (const NotPsdError&) {
        worst = kInf;
      }
    }
  }
  return make_report("one-dim reduction " + describe(line), worst, 1e-12,
                     "grid of (s, t, x, y) against the classical OU transition kernel");
}

std::vector<double> l2_gaps(const KernelParams& p, const CovarianceModel& model, std::span<const Corner> sequence,
                            const Corner& limit) {
  std::vector<double> gaps;
  gaps.reserve(sequence.size());
  const double at_limit = model(p, limit, limit);
  for (const auto& u : sequence) gaps.push_back(model(p, u, u) + at_limit - 2.0 * model(p, u, limit));
  return gaps;
}

CheckReport check_continuity(const KernelParams& p, std::span<const FlowSpec> flows, double tolerance,
                             const CovarianceModel& model) {
  constexpr int kHalvings = 40;
  double worst = 0.0;
  std::ostringstream details;
  for (std::size_t fi = 0; fi < flows.size(); ++fi) {
    const FlowSpec& flow = flows[fi];
    const double mid = flow.segments() / 2.0;
    const Corner limit = flow.at(mid);
    std::vector<Corner> inner;
    std::vector<Corner> outer;
    for (int n = 1; n <= kHalvings; ++n) {
      const double h = mid * std::ldexp(1.0, -n);
      inner.push_back(flow.at(mid - h));
      outer.push_back(flow.at(mid + h));
    }
    double flow_worst = 0.0;
    for (const auto* seq : {&inner, &outer}) {
      const auto gaps = l2_gaps(p, model, *seq, limit);
      for (std::size_t n = 0; n < gaps.size(); ++n) {
        const double d = measure_symdiff(p.measure(), (*seq)[n], limit);
        const double closed = p.sigma() * p.sigma() / p.lambda() * -std::expm1(-p.lambda() * d);
        flow_worst = std::max({flow_worst, std::abs(gaps[n] - closed), -gaps[n]});
        if (std::isnan(gaps[n])) flow_worst = kInf;
      }
      flow_worst = std::max(flow_worst, gaps.back());
    }
    details << "flow " << fi << ": " << flow_worst << "; ";
    worst = std::max(worst, flow_worst);
  }
  details << "inner and outer sequences at the flow midpoints, " << kHalvings << " halvings";
  return make_report("continuity " + describe(p), worst, tolerance, details.str());
}

Corner matched_corner(const MeasureSpec& measure, Eigen::Index dim, Eigen::Index axis, double target) {
  if (axis < 0 || axis >= dim) throw ConfigError("axis out of range");
  if (!(target >= 0.0)) throw ConfigError("matched measure must be >= 0");
  Eigen::VectorXd c(dim);
  if (measure.kind() == MeasureSpec::Kind::lebesgue) {
    c.setOnes();
    c[axis] = target;
  } else {
    c.setZero();
    c[axis] = target / measure.alpha()[axis];
  }
  return Corner(c);
}

CheckReport check_stationarity(const KernelParams& p, const Corner& v, std::span<const Corner> us,
                               std::span<const Corner> as, const CovarianceModel& model) {
  if (us.empty() || us.size() != as.size()) throw ConfigError("stationarity needs two sequences of equal length");
  const std::vector<Corner> vs{v};
  const UnionSet vset = canonicalize(vs);
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i > 0 && (!leq(us[i - 1], us[i]) || !leq(as[i - 1], as[i]))) {
      throw ConfigError("stationarity sequences must be increasing");
    }
    const double lhs = measure_diff(p.measure(), us[i], vset);
    const double rhs = measure_rect(p.measure(), as[i]);
    if (std::abs(lhs - rhs) > 1e-9) {
      std::ostringstream os;
      os << "m(U_" << i << " \\ V) = " << lhs << " does not match m(A_" << i << ") = " << rhs;
      throw ConfigError(os.str());
    }
  }
  const Eigen::MatrixXd gu = gram_matrix(model, p, us);
  const Eigen::MatrixXd ga = gram_matrix(model, p, as);
  const double gap = (gu - ga).cwiseAbs().maxCoeff();
  const double statistic = std::max({gap, psd_violation(gu), psd_violation(ga)});
  std::ostringstream details;
  details << us.size() << " matched sets; max Gram difference " << gap;
  return make_report("stationarity " + describe(p), statistic, 1e-10, details.str());
}

CheckReport check_stationarity_constructed(const KernelParams& p, Eigen::Index dim, const RngSeed& seed,
                                           const CovarianceModel& model) {
  require_dim(p, dim);
  Engine engine = make_engine(seed);
  const Corner v = random_corners(engine, dim, 1).front();
  std::vector<Corner> us;
  std::vector<Corner> as;
  const std::vector<Corner> vs{v};
  const UnionSet vset = canonicalize(vs);
  Eigen::VectorXd u = v.coords();
  for (int i = 0; i < 5; ++i) {
    u[0] += grid_value(engine, 1, 4);
    us.emplace_back(u);
    as.push_back(matched_corner(p.measure(), dim, dim - 1, measure_diff(p.measure(), us.back(), vset)));
  }
  auto report = check_stationarity(p, v, us, as, model);
  std::ostringstream details;
  details << report.details << "; V=(" << v.coords().transpose() << "), U_i grows along axis 0 beyond V, A_i solved "
          << "on axis " << dim - 1 << " from the origin";
  report.details = details.str();
  report.name += " N=" + std::to_string(dim);
  return report;
}

CheckReport check_flow_projection(const KernelParams& p, const FlowSpec& flow, const CovarianceModel& model) {
  constexpr int kPoints = 9;
  std::vector<Corner> points;
  std::vector<double> theta;
  for (int j = 0; j < kPoints; ++j) {
    points.push_back(flow.at(flow.segments() * j / (kPoints - 1)));
    theta.push_back(measure_rect(p.measure(), points.back()));
  }
  double worst = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double projected = p.stationary_variance() * std::exp(-p.lambda() * std::abs(theta[i] - theta[j]));
      const double value = std::abs(model(p, points[i], points[j]) - projected);
      if (value > worst || std::isnan(value)) worst = value;
    }
  }
  std::ostringstream details;
  details << kPoints << " points along a flow with " << flow.waypoints().size() << " waypoints";
  return make_report("flow projection " + describe(p), worst, 1e-10, details.str());
}

std::vector<FlowSpec> standard_flows(Eigen::Index dim, const RngSeed& seed) {
  std::vector<FlowSpec> flows;
  const Corner origin = Corner::origin(dim);
  flows.emplace_back(std::vector<Corner>{origin, Corner(Eigen::VectorXd::Ones(dim)),
                                         Corner(Eigen::VectorXd::Constant(dim, 2.0))});

  std::vector<Corner> staircase{origin};
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    c[k] = 1.5;
    staircase.emplace_back(c);
  }
  flows.emplace_back(std::move(staircase));

  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> step(0.0, 0.75);
  std::vector<Corner> random_flow{origin};
  c.setZero();
  for (int i = 0; i < 4; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) c[k] += step(engine);
    random_flow.emplace_back(c);
  }
  flows.emplace_back(std::move(random_flow));
  return flows;
}

CheckReport check_mc_moments(const Eigen::MatrixXd& values, const GaussianSpec<double>& theory, double tolerance) {
  const Eigen::Index n = values.rows();
  if (n < 1000) throw ConfigError("Monte Carlo moment checks need at least 1000 replicates");
  if (values.cols() != theory.dim()) throw ConfigError("sample and theory dimensions differ");
  const auto nd = static_cast<double>(n);
  const Moments m = empirical_moments(values);

  WorstZ worst;
  for (Eigen::Index i = 0; i < theory.dim(); ++i) {
    const double se = std::sqrt(std::max(0.0, theory.cov(i, i)) / nd);
    worst.update(z_score(m.mean[i] - theory.mean[i], se, theory.mean[i]), entry_label("mean", i));
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double var = theory.cov(i, i) * theory.cov(j, j) + theory.cov(i, j) * theory.cov(i, j);
      const double cse = std::sqrt(std::max(0.0, var) / nd);
      worst.update(z_score(m.cov(i, j) - theory.cov(i, j), cse, theory.cov(i, j)), entry_label("cov", i, j));
    }
  }
  std::ostringstream details;
  details << "n=" << n << ", worst entry " << worst.where;
  return make_report("mc moments", worst.z, tolerance, details.str());
}

CheckReport check_mc_moments(const SamplePath& observed, const GaussianSpec<double>& theory, double tolerance) {
  return check_mc_moments(observed.values, theory, tolerance);
}

CheckReport check_mc_agreement(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tolerance) {
  if (a.rows() < 1000 || b.rows() < 1000) throw ConfigError("Monte Carlo comparisons need at least 1000 replicates");
  if (a.cols() != b.cols()) throw ConfigError("samples have different column counts");
  const auto na = static_cast<double>(a.rows());
  const auto nb = static_cast<double>(b.rows());
  const Moments ma = empirical_moments(a);
  const Moments mb = empirical_moments(b);

  WorstZ worst;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const double se = std::sqrt(ma.cov(i, i) / na + mb.cov(i, i) / nb);
    worst.update(z_score(ma.mean[i] - mb.mean[i], se, ma.mean[i]), entry_label("mean", i));
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double va = ma.cov(i, i) * ma.cov(j, j) + ma.cov(i, j) * ma.cov(i, j);
      const double vb = mb.cov(i, i) * mb.cov(j, j) + mb.cov(i, j) * mb.cov(i, j);
      const double cse = std::sqrt(va / na + vb / nb);
      worst.update(z_score(ma.cov(i, j) - mb.cov(i, j), cse, ma.cov(i, j)), entry_label("cov", i, j));
    }
  }
  std::ostringstream details;
  details << "n=" << a.rows() << "/" << b.rows() << ", worst entry " << worst.where;
  return make_report("mc agreement", worst.z, tolerance, details.str());
}

Eigen::MatrixXd align_columns(const SamplePath& path, std::span<const Corner> corners) {
  Eigen::MatrixXd out(path.values.rows(), static_cast<Eigen::Index>(corners.size()));
  for (std::size_t j = 0; j < corners.size(); ++j) {
    const auto it = std::find_if(path.corners.begin(), path.corners.end(),
                                 [&](const Corner& c) { return approx_equal(c, corners[j]); });
    if (it == path.corners.end()) throw ConfigError("corner missing from the sample path");
    out.col(static_cast<Eigen::Index>(j)) = path.values.col(it - path.corners.begin());
  }
  return out;
}

SheetComparison run_sheet_experiment(const SheetExperiment& ex) {
  const auto dim = ex.alpha.size();
  const double truncation = truncation_for(ex.alpha, ex.truncation_target, ex.width);
  SheetComparison out{GridSpec::uniform(dim, truncation, ex.upper, ex.width), {}, {}, {}};

  auto index_of = [&](const Corner& c) {
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      if (approx_equal(out.points[i], c)) return static_cast<Eigen::Index>(i);
    }
    out.points.push_back(c);
    return static_cast<Eigen::Index>(out.points.size() - 1);
  };
  std::vector<std::pair<Eigen::Index, Eigen::Index>> columns;
  for (const auto& [s, t] : ex.pairs) columns.emplace_back(index_of(s), index_of(t));

  out.values = simulate_sheet(out.grid, ex.alpha, ex.sigma, ex.model, ex.y0, out.points, ex.replicates, ex.seed);
  const Moments m = empirical_moments(out.values);
  const auto n = static_cast<double>(ex.replicates);

  auto theory = [&](const Corner& s, const Corner& t) {
    if (ex.model == SheetModel::started) return cov_dirac(equivalent_kernel(ex.alpha, ex.sigma), s, t);
    return stationary_sheet_covariance(ex.alpha, ex.sigma, s, t);
  };
  for (std::size_t k = 0; k < ex.pairs.size(); ++k) {
    const auto& [s, t] = ex.pairs[k];
    const auto [i, j] = columns[k];
    SheetPairResult r{s, t, m.cov(i, j), theory(s, t), 0.0, 0.0};
    r.discretized = discretized_covariance(out.grid, ex.alpha, ex.sigma, s, t, ex.model);
    const double cst = r.theory;
    r.standard_error = std::sqrt(std::max(0.0, theory(s, s) * theory(t, t) + cst * cst) / n);
    out.pairs.push_back(std::move(r));
  }
  return out;
}

CheckReport check_sheet_representation(const SheetComparison& comparison, double allowance) {
  double worst = -kInf;
  double worst_bias = 0.0;
  for (const auto& r : comparison.pairs) {
    worst = std::max(worst, std::abs(r.empirical - r.theory) - 5.0 * r.standard_error);
    worst_bias = std::max(worst_bias, std::abs(r.discretized - r.theory));
  }
  std::ostringstream details;
  details << comparison.pairs.size() << " pairs, n=" << comparison.values.rows() << ", grid width "
          << comparison.grid.widths()[0] << ", truncation L=" << comparison.grid.truncation()
          << ", max |discretized - theory| = " << worst_bias;
  return make_report("sheet representation", worst, allowance, details.str());
}

std::vector<CheckReport> deterministic_suite(const SuiteOptions& options) {
  std::vector<CheckReport> reports;
  std::uint64_t stream = 0;
  auto next_seed = [&] { return RngSeed{options.seed, stream++}; };
  const Eigen::Vector3d alpha(1.0, 2.0, 0.5);

  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double sigma2 : {1.0, 2.0}) {
      const double sigma = std::sqrt(sigma2);
      const KernelParams base(lambda, sigma, MeasureSpec::lebesgue());
      reports.push_back(check_psd(base, 50, next_seed(), options.model));
      reports.push_back(check_one_dim_reduction(base, options.model));

      for (bool axis : {false, true}) {
        for (Eigen::Index dim = 1; dim <= 3; ++dim) {
          const MeasureSpec measure = axis ? MeasureSpec::axis(alpha.head(dim)) : MeasureSpec::lebesgue();
          const KernelParams p(lambda, sigma, measure);
          const std::string suffix = " N=" + std::to_string(dim);

          reports.push_back(check_schur(p, dim, 20, next_seed(), options.model));
          reports.push_back(check_markov_orthogonality(p, dim, 40, next_seed(), options.model));

          const auto flows = standard_flows(dim, next_seed());
          auto continuity = check_continuity(p, flows, 1e-9, options.model);
          continuity.name += suffix;
          reports.push_back(std::move(continuity));

          reports.push_back(check_stationarity_constructed(p, dim, next_seed(), options.model));

          double flow_worst = 0.0;
          for (const auto& flow : flows) {
            const auto r = check_flow_projection(p, flow, options.model);
            flow_worst = std::max(flow_worst, std::isnan(r.statistic) ? kInf : r.statistic);
          }
          reports.push_back(make_report("flow projection " + describe(p) + suffix, flow_worst, 1e-10,
                                        std::to_string(flows.size()) + " flows (diagonal, staircase, random)"));
        }
      }
    }
  }
  return reports;
}

std::vector<CheckReport> mc_suite(std::uint64_t seed) {
  std::vector<CheckReport> reports;
  std::uint64_t stream = 1000;
  auto next_seed = [&] { return RngSeed{seed, stream++}; };
  constexpr std::size_t kReplicates = 100000;

  const KernelParams p(1.0, std::sqrt(2.0), MeasureSpec::lebesgue());
  const std::vector<Corner> family{{1.0, 0.5}, {0.5, 1.0}, {1.0, 1.0}, {1.5, 0.5}, {0.5, 1.5}, {1.5, 1.5}};
  const Plan plan = make_plan(family);

  // Dirac start: theory straight from mean_dirac / cov_dirac.
  const double x0 = 0.7;
  GaussianSpec<double> dirac_theory{Eigen::VectorXd(plan.corners.size()),
                                    Eigen::MatrixXd(plan.corners.size(), plan.corners.size())};
  for (std::size_t i = 0; i < plan.corners.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    dirac_theory.mean[ii] = mean_dirac(p, x0, plan.corners[i]);
    for (std::size_t j = 0; j < plan.corners.size(); ++j) {
      dirac_theory.cov(ii, static_cast<Eigen::Index>(j)) = cov_dirac(p, plan.corners[i], plan.corners[j]);
    }
  }
  const auto markov = simulate(plan, p, DiracLaw{x0}, kReplicates, next_seed());
  const auto exact = simulate_exact(plan.corners, p, DiracLaw{x0}, kReplicates, next_seed());
  auto r = check_mc_moments(markov, dirac_theory);
  r.name = "dirac start: markov sampler vs closed form";
  reports.push_back(std::move(r));
  r = check_mc_moments(exact, dirac_theory);
  r.name = "dirac start: exact sampler vs closed form";
  reports.push_back(std::move(r));
  r = check_mc_agreement(markov.values, exact.values);
  r.name = "dirac start: markov vs exact sampler";
  reports.push_back(std::move(r));

  // Stationary initial law.
  GaussianSpec<double> stationary_theory{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(plan.corners.size())),
                                         gram_matrix(stationary_model(), p, plan.corners)};
  const auto stationary = simulate(plan, p, InitialLaw::stationary(p), kReplicates, next_seed());
  r = check_mc_moments(stationary, stationary_theory);
  r.name = "stationary start: markov sampler vs cov_stationary";
  reports.push_back(std::move(r));

  // A different linear extension of the same corners.
  const Plan lex_plan = make_plan(family, LinearExtension::lexicographic);
  const auto reordered = simulate(lex_plan, p, DiracLaw{x0}, kReplicates, next_seed());
  r = check_mc_agreement(markov.values, align_columns(reordered, plan.corners));
  r.name = "order independence: by-sum vs lexicographic extension";
  reports.push_back(std::move(r));

  // One-parameter chain against the classical two-point law.
  {
    const double s = 0.5;
    const double t = 1.25;
    const double lam = p.lambda();
    const double var = p.stationary_variance();
    const std::vector<Corner> chain{{s}, {t}};
    const KernelParams line(lam, p.sigma(), MeasureSpec::lebesgue());
    const Plan chain_plan = make_plan(chain);
    const auto sample = simulate(chain_plan, line, DiracLaw{1.0}, kReplicates, next_seed());
    Eigen::Vector3d times(0.0, s, t);
    GaussianSpec<double> classical{Eigen::VectorXd(3), Eigen::MatrixXd(3, 3)};
    for (int i = 0; i < 3; ++i) {
      classical.mean[i] = std::exp(-lam * times[i]);
      for (int j = 0; j < 3; ++j) {
        classical.cov(i, j) =
            var * (std::exp(-lam * std::abs(times[i] - times[j])) - std::exp(-lam * (times[i] + times[j])));
      }
    }
    r = check_mc_moments(sample, classical);
    r.name = "one-dim chain vs classical OU";
    reports.push_back(std::move(r));
  }

  // Brownian-sheet representation.
  SheetExperiment ex;
  ex.alpha = Eigen::Vector2d(1.0, 2.0);
  ex.sigma = 1.0;
  ex.y0 = 0.0;
  ex.width = 0.05;
  ex.truncation_target = 1e-3;
  ex.replicates = 20000;
  ex.seed = next_seed();
  const std::vector<Corner> ss{{0.25, 0.5}, {0.5, 1.0}, {1.0, 0.25}};
  const std::vector<Corner> ts{{0.5, 0.5}, {1.0, 1.0}, {0.75, 0.25}};
  for (const auto& s : ss) {
    for (const auto& t : ts) ex.pairs.emplace_back(s, t);
  }
  const auto comparison = run_sheet_experiment(ex);
  reports.push_back(check_sheet_representation(comparison, 2.0 * ex.width));

  // The discretized covariance is exact for the simulated field, so the sample
  // must match it at pure Monte Carlo tolerance.
  double worst = 0.0;
  for (const auto& pr : comparison.pairs) {
    worst = std::max(worst, std::abs(pr.empirical - pr.discretized) / pr.standard_error);
  }
  reports.push_back(make_report("sheet discretization vs Monte Carlo", worst, 5.0,
                                "max |z| of empirical vs exact discretized covariance"));
  return reports;
}

}  // namespace siou
