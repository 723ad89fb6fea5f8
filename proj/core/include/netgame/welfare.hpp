#pragma once

#include <span>
#include <vector>

#include "netgame/graph.hpp"

namespace netgame {

/// sum_i [a_i - a_i^2 / 2 + lambda a_i sum_j g_ij a_j].
double welfare(const Graph& g, std::span<const double> actions, double lambda);

struct WelfareTriple {
  double incomplete = 0.0;  // equilibrium under the core-periphery prior
  double complete = 0.0;    // complete-information equilibrium
  double efficient = 0.0;   // welfare-maximizing actions
};

/// Welfare of the three action profiles on the realized core-periphery
/// graph with n_co core agents. Uses closed forms only, so any n up to 60
/// works. Needs n >= 4 and 0 <= lambda < 1/(2(n-1)).
WelfareTriple cp_welfare_triple(int n, int n_co, double lambda);

struct SweepRow {
  int n_co = 0;
  WelfareTriple welfare;
};

/// One row per core size in [first, last], ascending.
std::vector<SweepRow> welfare_sweep(int n, double lambda, int first, int last);
/// Default range 1..floor(n/2).
std::vector<SweepRow> welfare_sweep(int n, double lambda);

}  // namespace netgame
