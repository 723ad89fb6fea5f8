#include "netgame/welfare.hpp"

#include <stdexcept>
#include <string>

#include "netgame/closed_forms.hpp"

namespace netgame {

double welfare(const Graph& g, std::span<const double> actions,
               double lambda) {
  const int n = g.size();
  if (static_cast<int>(actions.size()) != n) {
    throw std::invalid_argument("need one action per vertex");
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double spill = 0.0;
    for (int j : g.neighbors(i)) spill += actions[j];
    const double a = actions[i];
    total += a - 0.5 * a * a + lambda * a * spill;
  }
  return total;
}

namespace {

// Welfare on the core-periphery graph when every core agent plays a_co and
// every periphery agent plays a_p.
double cp_welfare(int n_co, int n_p, const CpActions& a, double lambda) {
  const double co = a.core.value_or(0.0);
  const double pe = a.periphery.value_or(0.0);
  const double core_utility =
      co - 0.5 * co * co + lambda * co * ((n_co - 1) * co + n_p * pe);
  const double periphery_utility =
      pe - 0.5 * pe * pe + lambda * pe * n_co * co;
  return n_co * core_utility + n_p * periphery_utility;
}

}  // namespace

WelfareTriple cp_welfare_triple(int n, int n_co, double lambda) {
  if (n < 4) throw std::invalid_argument("welfare sweep needs n >= 4");
  if (n_co < 0 || n_co > n) {
    throw std::invalid_argument("core size must be in [0, n]");
  }
  if (!(lambda >= 0.0) || !(2.0 * lambda * (n - 1) < 1.0)) {
    throw std::domain_error("efficient actions need 0 <= lambda < 1/(2(n-1)), got " +
                            std::to_string(lambda));
  }
  // A core of n-1 is the complete graph; count everyone as core.
  if (n_co == n - 1) n_co = n;
  const int n_p = n - n_co;

  WelfareTriple out;
  if (n_co == 0) {
    out.incomplete = out.complete = out.efficient = 0.5 * n;
    return out;
  }
  out.incomplete = cp_welfare(n_co, n_p, cp_bne(n, lambda, n_co), lambda);
  out.complete = cp_welfare(n_co, n_p, cp_complete_info(n_co, n_p, lambda), lambda);
  out.efficient = cp_welfare(n_co, n_p, cp_efficient(n_co, n_p, lambda), lambda);
  return out;
}

std::vector<SweepRow> welfare_sweep(int n, double lambda, int first,
                                    int last) {
  if (first > last) throw std::invalid_argument("empty core-size range");
  std::vector<SweepRow> rows;
  rows.reserve(last - first + 1);
  for (int k = first; k <= last; ++k) {
    rows.push_back({k, cp_welfare_triple(n, k, lambda)});
  }
  return rows;
}

std::vector<SweepRow> welfare_sweep(int n, double lambda) {
  return welfare_sweep(n, lambda, 1, n / 2);
}

}  // namespace netgame
