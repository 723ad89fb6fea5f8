#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netgame/graph.hpp"
#include "netgame/prior.hpp"

namespace netgame {

/// Actions in a core-periphery network. `core` is empty when the core is
/// empty; `periphery` is empty when the network is complete.
struct CpActions {
  std::optional<double> core;
  std::optional<double> periphery;
};

/// Complete-information actions on the core-periphery graph with n_co core
/// and n_p periphery vertices. A core of n-1 is the complete graph and is
/// reported as such.
CpActions cp_complete_info(int n_co, int n_p, double lambda);

/// Efficient (welfare-maximizing) actions, b(g, 2 lambda), on the same
/// graph. Only needs 2 lambda rho(g) < 1, which can hold at
/// 2 lambda (n-1) = 1 when the graph is not complete.
CpActions cp_efficient(int n_co, int n_p, double lambda);

/// Interim expectations of a core agent under the uniform core-periphery
/// prior: X = E[n_p], Z = E[n_co - 1], Y = E[n_p n_co]. Each is
/// scale * sum / denom with exact integer sums.
struct CpExpectations {
  int n = 0;
  std::uint64_t x_sum = 0;  // sum_{k=1}^{n-2} C(n-2, k-1)
  std::uint64_t z_sum = 0;  // denom - x_sum
  std::uint64_t y_sum = 0;  // sum_{k=1}^{n-2} k C(n-2, k-1)
  std::uint64_t denom = 0;  // 2^(n-1) - (n-1)
  std::uint64_t scale = 0;  // n - 1

  double x() const;
  double y() const;
  double z() const;
};

/// 4 <= n <= 60.
CpExpectations cp_expectations(int n);

/// Equilibrium under the uniform core-periphery prior. The core action does
/// not depend on n_co; the periphery action 1 + lambda n_co a_co does.
CpActions cp_bne(int n, double lambda, int n_co);

/// 1 + lambda d / (1 - n lambda / 2).
double uniform_bne(int n, double lambda, int d);

struct ErAction {
  double action = 0.0;
  // p is 0 or 1, so some conditioning events have zero prior probability.
  bool degenerate_prior = false;
};

/// 1 + lambda d / (1 - lambda ((n-2) p + 1)).
ErAction er_bne(int n, double lambda, double p, int d);

struct GammaMatrix {
  int groups = 0;
  std::vector<double> values;  // row-major groups x groups

  double operator()(int k, int l) const { return values[k * groups + l]; }
};

GammaMatrix sb_gamma(const BlockModel& model, double lambda);
/// 1 + lambda sum_l gamma_kl d_l, with d_l the number of group-l neighbors.
double sb_action(const BlockModel& model, double lambda, int group,
                 const std::vector<int>& degrees);
double sb_action(const BlockModel& model, const GammaMatrix& gamma,
                 double lambda, int group, const std::vector<int>& degrees);

/// b(g, 2 lambda).
std::vector<double> efficient_actions(const Graph& g, double lambda,
                                      DecayBound bound = DecayBound::kUniform);

enum class CoreOrdering {
  kCompleteBelowIncomplete,  // a_co^c < a_co* (< a_co^e)
  kIncompleteBelowComplete,  // a_co* < a_co^c (< a_co^e)
  kTied,
};

struct CoreOrderingVerdict {
  int n = 0;
  int n_co = 0;
  double lambda = 0.0;
  double complete = 0.0;
  double incomplete = 0.0;
  std::optional<double> efficient;  // empty when b(g, 2 lambda) diverges
  CoreOrdering ordering = CoreOrdering::kTied;
  bool efficient_on_top = false;
};

/// Compares the three core actions for a core of n_co out of n agents.
/// The ordering claims concern n >= 7; smaller n >= 4 is evaluated anyway.
CoreOrderingVerdict core_ordering_check(int n, int n_co, double lambda);

}  // namespace netgame
