#include "netgame/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace netgame {

double ActionProfile::action(TypeId t) const {
  const auto it = std::lower_bound(types.begin(), types.end(), t);
  if (it == types.end() || *it != t) {
    throw std::out_of_range("type not present in action profile");
  }
  return values[it - types.begin()];
}

ConvergenceError::ConvergenceError(int iterations, double last_step,
                                   double modulus)
    : std::runtime_error("fixed point did not converge after " +
                         std::to_string(iterations) +
                         " sweeps (last step " + std::to_string(last_step) +
                         ", contraction modulus " + std::to_string(modulus) +
                         ")"),
      iterations_(iterations),
      last_step_(last_step) {}

namespace {

ActionProfile make_profile(const BlockSystem& system,
                           std::vector<double> values) {
  ActionProfile out;
  out.players = system.players();
  out.types = system.types();
  out.values = std::move(values);
  out.on_support.resize(out.types.size());
  for (std::size_t r = 0; r < out.types.size(); ++r) {
    out.on_support[r] = system.on_support(r);
  }
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    d = std::max(d, std::abs(a[k] - b[k]));
  }
  return d;
}

BlockSystem walk_system(const Prior& prior) {
  BlockOptions options;
  if (!prior.factored() && prior.size() > kMaxDenseBlockVertices) {
    options.space = TypeSpace::kReduced;
  }
  return BlockSystem::build(prior, 0.0, options);
}

}  // namespace

int iteration_cap(double tol, double modulus, int margin) {
  if (modulus <= 0.0 || tol >= 1.0) return margin + 1;
  return static_cast<int>(std::ceil(std::log(tol) / std::log(modulus))) +
         margin;
}

FixedPointSolution solve_fixed_point(const BlockSystem& system,
                                     FixedPointOptions options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  const std::size_t dim = system.dimension();
  const double lambda = system.lambda();
  const double modulus = lambda * (system.players() - 1);
  const int cap = iteration_cap(options.tol, modulus, options.margin);

  FixedPointSolution out;
  out.modulus = modulus;
  std::vector<double> a(dim, 1.0);
  std::vector<double> next(dim);
  std::vector<double> ba(dim);

  double step = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cap; ++k) {
    system.apply(a, ba, options.threads);
    for (std::size_t r = 0; r < dim; ++r) next[r] = 1.0 + lambda * ba[r];
    step = sup_distance(next, a);
    a.swap(next);
    out.step_norms.push_back(step);
    out.iterations = k + 1;
    if (step < options.tol) break;
  }
  if (!(step < options.tol)) {
    throw ConvergenceError(out.iterations, step, modulus);
  }

  system.apply(a, ba, options.threads);
  for (std::size_t r = 0; r < dim; ++r) {
    out.residual = std::max(out.residual, std::abs(a[r] - 1.0 - lambda * ba[r]));
  }
  out.profile = make_profile(system, std::move(a));
  return out;
}

ActionProfile solve_direct(const BlockSystem& system) {
  const std::size_t dim = system.dimension();
  const std::vector<double> b = system.dense();
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      m(r, c) = (r == c ? 1.0 : 0.0) - system.lambda() * b[r * dim + c];
    }
  }
  const Eigen::VectorXd x =
      m.partialPivLu().solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)));
  if (!x.allFinite()) {
    throw std::logic_error("block system is singular");
  }
  return make_profile(system, std::vector<double>(x.data(), x.data() + dim));
}

std::vector<double> beta_vector(const BlockSystem& system, int s,
                                int threads) {
  if (s < 0) throw std::invalid_argument("walk length must be >= 0");
  std::vector<double> beta(system.dimension(), 1.0);
  std::vector<double> next(system.dimension());
  for (int k = 0; k < s; ++k) {
    system.apply(beta, next, threads);
    beta.swap(next);
  }
  return beta;
}

double beta_coefficient(const Prior& prior, TypeId observer, int s) {
  if (prior.marginal(observer) <= kProbabilityTolerance) {
    throw std::invalid_argument("observer type has zero probability");
  }
  const BlockSystem system = walk_system(prior);
  return beta_vector(system, s)[system.row_of(observer)];
}

std::vector<SeriesEstimate> action_series(const BlockSystem& system,
                                          int order, int threads) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  const std::size_t dim = system.dimension();
  const double lambda = system.lambda();
  const double modulus = lambda * (system.players() - 1);
  const double tail = std::pow(modulus, order + 1) / (1.0 - modulus);

  std::vector<SeriesEstimate> out(dim);
  std::vector<double> beta(dim, 1.0);
  std::vector<double> next(dim);
  double scale = 1.0;
  for (int s = 0; s <= order; ++s) {
    if (s > 0) {
      system.apply(beta, next, threads);
      beta.swap(next);
      scale *= lambda;
    }
    for (std::size_t r = 0; r < dim; ++r) {
      out[r].value += scale * beta[r];
      out[r].partial_sums.push_back(out[r].value);
    }
  }
  for (auto& e : out) e.tail_bound = tail;
  return out;
}

SeriesEstimate action_by_series(const Prior& prior, double lambda,
                                TypeId observer, int order) {
  check_lambda(lambda, prior.size());
  if (prior.marginal(observer) <= kProbabilityTolerance) {
    throw std::invalid_argument("observer type has zero probability");
  }
  BlockOptions options;
  if (!prior.factored() && prior.size() > kMaxDenseBlockVertices) {
    options.space = TypeSpace::kReduced;
  }
  const BlockSystem system = BlockSystem::build(prior, lambda, options);
  return action_series(system, order)[system.row_of(observer)];
}

std::vector<double> complete_info_nash(const Graph& g, double lambda) {
  return katz_bonacich(g, lambda, DecayBound::kUniform);
}

ExpectationGap expectation_gap_report(const Prior& prior, TypeId observer,
                                      int s) {
  const int n = prior.size();
  const double m = prior.marginal(observer);
  if (m <= kProbabilityTolerance) {
    throw std::invalid_argument("observer type has zero probability");
  }
  const std::uint32_t row = type_row(observer.player, observer.code, n);
  ExpectationGap out;
  prior.for_each_support([&](const Graph& g, double mass) {
    const double walks = walk_measure(g, observer.player, s);
    out.ex_ante += mass * walks;
    if (g.row(observer.player) == row) out.interim += mass * walks;
  });
  out.interim /= m;
  out.beta = beta_coefficient(prior, observer, s);
  return out;
}

}  // namespace netgame
