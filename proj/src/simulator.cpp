#include "siou/simulator.hpp"

#include <cmath>
#include <sstream>
#include <type_traits>

#include "siou/error.hpp"
#include "siou/measure.hpp"
#include "siou/parallel.hpp"

namespace siou {

InitialLaw::InitialLaw(NormalLaw law) : law_(law) {
  if (!(law.var >= 0.0)) throw ConfigError("normal initial law needs a nonnegative variance");
}

InitialLaw::InitialLaw(EmpiricalLaw law) : law_(std::move(law)) {
  if (std::get<EmpiricalLaw>(law_).values.empty()) throw ConfigError("empirical initial law needs values");
}

double InitialLaw::draw(Engine& engine) const {
  return std::visit(
      [&](const auto& law) -> double {
        using Law = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<Law, DiracLaw>) {
          return law.x0;
        } else if constexpr (std::is_same_v<Law, NormalLaw>) {
          return law.mu + std::sqrt(law.var) * StandardNormal{}(engine);
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, law.values.size() - 1);
          return law.values[pick(engine)];
        }
      },
      law_);
}

Plan make_plan(std::span<const Corner> corners, LinearExtension extension) {
  Plan plan;
  plan.corners = min_closure(corners, extension);
  const auto& order = plan.corners;

  for (std::size_t i = 1; i < order.size(); ++i) {
    std::vector<Corner> earlier;
    earlier.reserve(i);
    for (std::size_t j = 0; j < i; ++j) earlier.push_back(meet(order[j], order[i]));

    PlanStep step{i, Increment(order[i], earlier), {}, {}};
    step.frontier = frontier(step.increment);
    for (const auto& entry : step.frontier.entries) {
      std::size_t found = i;
      for (std::size_t j = 0; j < i; ++j) {
        if (approx_equal(order[j], entry.corner)) {
          found = j;
          break;
        }
      }
      if (found == i) {
        std::ostringstream os;
        os << "frontier corner (" << entry.corner.coords().transpose() << ") of step " << i
           << " was not sampled earlier";
        throw PlanningError(os.str());
      }
      step.frontier_index.push_back(found);
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

SamplePath simulate(const Plan& plan, const KernelParams& params, const InitialLaw& initial,
                    std::size_t replicates, const RngSeed& seed) {
  if (replicates == 0) throw ConfigError("replicates must be >= 1");
  std::vector<TransitionParams> kernels;
  kernels.reserve(plan.steps.size());
  for (const auto& step : plan.steps) {
    kernels.push_back(transition_params(params, step.increment.a(), step.frontier));
  }

  const auto n = static_cast<Eigen::Index>(plan.corners.size());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(replicates), n);
  parallel_for(replicates, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd x(n);
    for (std::size_t r = begin; r < end; ++r) {
      Engine engine = make_engine(seed, r);
      StandardNormal normal;
      x[0] = initial.draw(engine);
      for (std::size_t s = 0; s < plan.steps.size(); ++s) {
        const auto& step = plan.steps[s];
        const auto& kernel = kernels[s];
        double mean = 0.0;
        for (std::size_t k = 0; k < step.frontier_index.size(); ++k) {
          mean += kernel.weights[k].weight * x[static_cast<Eigen::Index>(step.frontier_index[k])];
        }
        const double noise = normal(engine);
        x[static_cast<Eigen::Index>(step.index)] = mean + std::sqrt(kernel.variance) * noise;
      }
      values.row(static_cast<Eigen::Index>(r)) = x.transpose();
    }
  });
  return SamplePath{plan.corners, std::move(values), seed, params, initial};
}

GaussianSpec<double> exact_law(std::span<const Corner> corners, const KernelParams& params,
                               const InitialLaw& initial) {
  double mu = 0.0;
  double var0 = 0.0;
  if (const auto* dirac = std::get_if<DiracLaw>(&initial.law())) {
    mu = dirac->x0;
  } else if (const auto* normal = std::get_if<NormalLaw>(&initial.law())) {
    mu = normal->mu;
    var0 = normal->var;
  } else {
    throw ConfigError("exact simulation needs a Dirac or Normal initial law");
  }

  const auto n = static_cast<Eigen::Index>(corners.size());
  const auto& m = params.measure();
  const double lam = params.lambda();
  const double s = params.stationary_variance();
  Eigen::VectorXd mass(n);
  for (Eigen::Index i = 0; i < n; ++i) mass[i] = measure_rect(m, corners[static_cast<std::size_t>(i)]);

  GaussianSpec<double> law{(-lam * mass).array().exp() * mu, Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& u = corners[static_cast<std::size_t>(i)];
      const auto& v = corners[static_cast<std::size_t>(j)];
      const double decay = std::exp(-lam * (mass[i] + mass[j]));
      const double c = s * std::exp(-lam * measure_symdiff(m, u, v)) + (var0 - s) * decay;
      law.cov(i, j) = c;
      law.cov(j, i) = c;
    }
  }
  return law;
}

SamplePath simulate_exact(std::span<const Corner> corners, const KernelParams& params,
                          const InitialLaw& initial, std::size_t replicates, const RngSeed& seed) {
  if (replicates == 0) throw ConfigError("replicates must be >= 1");
  const auto law = exact_law(corners, params, initial);
  const auto factor = factorize(law.cov);
  const auto lower = factor.lower.triangularView<Eigen::Lower>();

  const Eigen::Index n = law.dim();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(replicates), n);
  parallel_for(replicates, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(n);
    for (std::size_t r = begin; r < end; ++r) {
      Engine engine = make_engine(seed, r);
      StandardNormal normal;
      for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(engine);
      values.row(static_cast<Eigen::Index>(r)) = (law.mean + lower * z).transpose();
    }
  });
  return SamplePath{{corners.begin(), corners.end()}, std::move(values), seed, params, initial};
}

}  // namespace siou
