#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "netgame/block_system.hpp"
#include "netgame/graph.hpp"
#include "netgame/prior.hpp"

namespace netgame {

/// One action per type of a block system, in the system's row order.
struct ActionProfile {
  int players = 0;
  std::vector<TypeId> types;
  std::vector<double> values;
  std::vector<char> on_support;

  std::size_t size() const { return values.size(); }
  /// Throws std::out_of_range when `t` is not part of the profile.
  double action(TypeId t) const;
};

struct FixedPointOptions {
  double tol = 1e-12;
  int threads = 1;
  // Extra sweeps allowed beyond the contraction-derived count.
  int margin = 64;
};

struct FixedPointSolution {
  ActionProfile profile;
  int iterations = 0;
  std::vector<double> step_norms;  // sup-norm of a^{k+1} - a^k
  double residual = 0.0;           // sup-norm of a - 1 - lambda B a
  double modulus = 0.0;            // lambda (n-1)
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(int iterations, double last_step, double modulus);
  int iterations() const { return iterations_; }
  double last_step() const { return last_step_; }

 private:
  int iterations_;
  double last_step_;
};

/// Largest iteration count needed to bring the step below `tol` at
/// contraction modulus `modulus`, plus `margin`.
int iteration_cap(double tol, double modulus, int margin);

/// Jacobi iteration a <- 1 + lambda B a from a = 1.
FixedPointSolution solve_fixed_point(const BlockSystem& system,
                                     FixedPointOptions options = {});

/// LU solve of (I - lambda B) a = 1.
ActionProfile solve_direct(const BlockSystem& system);

/// beta^(s) = B^s 1 for every row of `system`.
std::vector<double> beta_vector(const BlockSystem& system, int s,
                                int threads = 1);

/// Interim expected measure of length-s walks from `observer`.
double beta_coefficient(const Prior& prior, TypeId observer, int s);

struct SeriesEstimate {
  double value = 0.0;       // sum_{s <= S} lambda^s beta^(s)
  double tail_bound = 0.0;  // (lambda (n-1))^(S+1) / (1 - lambda (n-1))
  std::vector<double> partial_sums;  // one per order 0..S
};

/// Truncated walk series for every row at once.
std::vector<SeriesEstimate> action_series(const BlockSystem& system,
                                          int order, int threads = 1);
SeriesEstimate action_by_series(const Prior& prior, double lambda,
                                TypeId observer, int order);

/// Complete-information Nash actions, b(g, lambda).
std::vector<double> complete_info_nash(const Graph& g, double lambda);

struct ExpectationGap {
  double beta = 0.0;     // walk coefficient
  double ex_ante = 0.0;  // sum_g p(g) d_i^(s)(g)
  double interim = 0.0;  // same, conditioned on row i matching the type
};

/// Needs an enumerable support (table priors, or factored with n <= 7).
ExpectationGap expectation_gap_report(const Prior& prior, TypeId observer,
                                      int s);

}  // namespace netgame
