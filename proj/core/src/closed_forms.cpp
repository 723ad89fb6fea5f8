#include "netgame/closed_forms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "netgame/block_system.hpp"

namespace netgame {

namespace {

void check_core(int n_co, int n_p) {
  if (n_co < 0 || n_p < 0 || n_co + n_p < 2) {
    throw std::invalid_argument("core-periphery needs n_co, n_p >= 0 and n >= 2");
  }
}

// Actions of the complete-information game on the core-periphery graph at
// decay mu. Only requires mu rho(g) < 1, i.e. a positive denominator.
CpActions cp_katz(int n_co, int n_p, double mu) {
  if (n_co == 0) return {std::nullopt, 1.0};
  if (n_p <= 1) {
    // A core of n-1 joined to the last vertex is the complete graph.
    n_co += n_p;
    n_p = 0;
  }
  const double denom = 1.0 - mu * (n_co - 1) - mu * mu * n_p * n_co;
  if (!(denom > 0.0)) {
    throw std::domain_error("decay " + std::to_string(mu) +
                            " too large for core-periphery graph with core " +
                            std::to_string(n_co) + " of " +
                            std::to_string(n_co + n_p));
  }
  const double core = (1.0 + mu * n_p) / denom;
  if (n_p == 0) return {core, std::nullopt};
  return {core, 1.0 + mu * n_co * core};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) {
    out = out * static_cast<std::uint64_t>(n - k + i) / i;
  }
  return out;
}

}  // namespace

CpActions cp_complete_info(int n_co, int n_p, double lambda) {
  check_core(n_co, n_p);
  check_lambda(lambda, n_co + n_p);
  return cp_katz(n_co, n_p, lambda);
}

CpActions cp_efficient(int n_co, int n_p, double lambda) {
  check_core(n_co, n_p);
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  return cp_katz(n_co, n_p, 2.0 * lambda);
}

double CpExpectations::x() const {
  return static_cast<double>(scale) * static_cast<double>(x_sum) /
         static_cast<double>(denom);
}
double CpExpectations::y() const {
  return static_cast<double>(scale) * static_cast<double>(y_sum) /
         static_cast<double>(denom);
}
double CpExpectations::z() const {
  return static_cast<double>(scale) * static_cast<double>(z_sum) /
         static_cast<double>(denom);
}

CpExpectations cp_expectations(int n) {
  if (n <= 3 || n > 60) {
    throw std::invalid_argument("core-periphery expectations need 4 <= n <= 60");
  }
  CpExpectations out;
  out.n = n;
  out.scale = static_cast<std::uint64_t>(n - 1);
  out.denom = (std::uint64_t{1} << (n - 1)) - static_cast<std::uint64_t>(n - 1);
  for (int k = 1; k <= n - 2; ++k) {
    const std::uint64_t c = binomial(n - 2, k - 1);
    out.x_sum += c;
    out.y_sum += static_cast<std::uint64_t>(k) * c;
  }
  out.z_sum = out.denom - out.x_sum;
  return out;
}

CpActions cp_bne(int n, double lambda, int n_co) {
  if (n <= 3) throw std::invalid_argument("core-periphery equilibrium needs n > 3");
  if (n_co < 0 || n_co > n) {
    throw std::invalid_argument("core size must be in [0, n]");
  }
  check_lambda(lambda, n);
  const CpExpectations e = cp_expectations(n);
  const double denom =
      1.0 - lambda * e.z() - lambda * lambda * e.y();
  if (!(denom > 0.0)) {
    throw std::domain_error("core-periphery equilibrium denominator <= 0");
  }
  const double core = (1.0 + lambda * e.x()) / denom;
  if (n_co == 0) return {std::nullopt, 1.0};
  if (n_co >= n - 1) return {core, std::nullopt};
  return {core, 1.0 + lambda * n_co * core};
}

double uniform_bne(int n, double lambda, int d) {
  check_lambda(lambda, n);
  if (!(n * lambda < 2.0)) throw std::domain_error("need n lambda < 2");
  if (d < 0 || d > n - 1) throw std::invalid_argument("degree out of range");
  return 1.0 + lambda * d / (1.0 - n * lambda / 2.0);
}

ErAction er_bne(int n, double lambda, double p, int d) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0,1]");
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  if (d < 0 || d > n - 1) throw std::invalid_argument("degree out of range");
  const double denom = 1.0 - lambda * ((n - 2) * p + 1.0);
  if (!(denom > 0.0)) {
    throw std::domain_error("lambda ((n-2) p + 1) must be < 1");
  }
  return {1.0 + lambda * d / denom, p == 0.0 || p == 1.0};
}

GammaMatrix sb_gamma(const BlockModel& model, double lambda) {
  model.validate();
  check_lambda(lambda, model.players());
  const int m = model.groups();
  const double eps = model.across;
  const auto& size = model.sizes;
  const auto& p = model.within;
  auto idx = [m](int k, int l) { return k * m + l; };

  // gamma_kl is the expected action of a group-l neighbor of a group-k
  // agent, per unit of lambda, written as 1 + lambda (expected weighted
  // degree vector of that neighbor).
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m * m, m * m);
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const int row = idx(k, l);
      if (k == l) {
        a(row, idx(k, k)) -= lambda * ((size[k] - 2) * p[k] + 1.0);
        for (int s = 0; s < m; ++s) {
          if (s != k) a(row, idx(k, s)) -= lambda * size[s] * eps;
        }
      } else {
        a(row, idx(l, k)) -= lambda * ((size[k] - 1) * eps + 1.0);
        a(row, idx(l, l)) -= lambda * (size[l] - 1) * p[l];
        for (int s = 0; s < m; ++s) {
          if (s != k && s != l) a(row, idx(l, s)) -= lambda * size[s] * eps;
        }
      }
    }
  }
  auto lu = a.fullPivLu();
  if (!lu.isInvertible()) {
    throw std::domain_error("block gamma system is singular at lambda = " +
                            std::to_string(lambda) + ", eps = " +
                            std::to_string(eps));
  }
  const Eigen::VectorXd g = lu.solve(Eigen::VectorXd::Ones(m * m));
  GammaMatrix out;
  out.groups = m;
  out.values.assign(g.data(), g.data() + m * m);
  return out;
}

double sb_action(const BlockModel& model, const GammaMatrix& gamma,
                 double lambda, int group, const std::vector<int>& degrees) {
  const int m = model.groups();
  if (group < 0 || group >= m) throw std::out_of_range("group out of range");
  if (static_cast<int>(degrees.size()) != m || gamma.groups != m) {
    throw std::invalid_argument("need one degree per group");
  }
  double sum = 0.0;
  for (int l = 0; l < m; ++l) {
    const int cap = l == group ? model.sizes[l] - 1 : model.sizes[l];
    if (degrees[l] < 0 || degrees[l] > cap) {
      throw std::invalid_argument("degree toward group " + std::to_string(l) +
                                  " outside [0, " + std::to_string(cap) + "]");
    }
    sum += gamma(group, l) * degrees[l];
  }
  return 1.0 + lambda * sum;
}

double sb_action(const BlockModel& model, double lambda, int group,
                 const std::vector<int>& degrees) {
  return sb_action(model, sb_gamma(model, lambda), lambda, group, degrees);
}

std::vector<double> efficient_actions(const Graph& g, double lambda,
                                      DecayBound bound) {
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be >= 0");
  return katz_bonacich(g, 2.0 * lambda, bound);
}

CoreOrderingVerdict core_ordering_check(int n, int n_co, double lambda) {
  if (n_co < 1 || n_co > n - 1) {
    throw std::invalid_argument("core size must be in [1, n-1]");
  }
  CoreOrderingVerdict out;
  out.n = n;
  out.n_co = n_co;
  out.lambda = lambda;
  out.incomplete = *cp_bne(n, lambda, n_co).core;
  out.complete = *cp_complete_info(n_co, n - n_co, lambda).core;
  try {
    out.efficient = *cp_efficient(n_co, n - n_co, lambda).core;
  } catch (const std::domain_error&) {
    out.efficient.reset();
  }
  if (out.complete < out.incomplete) {
    out.ordering = CoreOrdering::kCompleteBelowIncomplete;
  } else if (out.incomplete < out.complete) {
    out.ordering = CoreOrdering::kIncompleteBelowComplete;
  }
  out.efficient_on_top = out.efficient && *out.efficient > out.incomplete &&
                         *out.efficient > out.complete;
  return out;
}

}  // namespace netgame
