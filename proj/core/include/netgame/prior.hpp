#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "netgame/graph.hpp"
#include "netgame/types.hpp"

namespace netgame {

/// Masses and marginals at or below this are treated as exactly zero when
/// classifying support.
inline constexpr double kProbabilityTolerance = 1e-12;

enum class PriorKind {
  kTable,
  kUniform,
  kCorePeripheryUniform,
  kPointMass,
  kIndependentLinks,
  kStochasticBlock,
};

const char* to_string(PriorKind kind);

/// Stochastic block parameters. Groups occupy contiguous player ranges:
/// players 0..sizes[0]-1 form group 0, and so on.
struct BlockModel {
  std::vector<int> sizes;
  std::vector<double> within;  // p_k, link probability inside group k
  double across = 0.0;         // epsilon, link probability across groups

  int players() const;
  int groups() const { return static_cast<int>(sizes.size()); }
  int group_of(int player) const;
  /// Throws std::invalid_argument on malformed parameters.
  void validate() const;
};

struct PosteriorEntry {
  TypeId target;
  double probability = 0.0;
};

/// Common-knowledge prior over labeled graphs on n vertices.
///
/// Dense kinds (table, uniform, core-periphery, point mass) hold or generate
/// an explicit support and precompute every posterior row at construction.
/// Factored kinds (independent links, stochastic block) evaluate marginals
/// and posteriors from link probabilities on demand. Instances are immutable
/// and cheap to copy.
class Prior {
 public:
  static Prior uniform(int n);
  static Prior core_periphery_uniform(int n);
  static Prior point_mass(const Graph& g);
  /// Masses keyed by upper-triangle graph code; must sum to 1 within 1e-12.
  static Prior table(int n,
                     std::vector<std::pair<std::uint64_t, double>> masses);
  static Prior from_graphs(std::vector<std::pair<Graph, double>> masses);
  /// `pi` is n*n row-major, symmetric, zero diagonal, entries in [0,1].
  static Prior independent_links(int n, std::vector<double> pi);
  static Prior stochastic_block(BlockModel model);

  PriorKind kind() const;
  int size() const;
  bool factored() const;

  /// pi_ij. Dense priors report the marginal link frequency under the prior.
  double link_probability(int i, int j) const;
  /// Throws std::logic_error unless kind() == kStochasticBlock.
  const BlockModel& block_model() const;

  /// Visits each positive-mass graph once. Factored priors are expanded on
  /// the fly and require n <= 7.
  void for_each_support(
      const std::function<void(const Graph&, double)>& visit) const;

  double marginal(TypeId t) const;
  double posterior(TypeId observer, TypeId target) const;
  /// Every positive posterior over the other players' types, ordered by
  /// flat index. Empty when the observer has zero marginal.
  std::vector<PosteriorEntry> posterior_row(TypeId observer) const;

  /// Dense-table copy of a factored prior (n <= 7). Dense priors return
  /// themselves.
  Prior expanded() const;

  struct Impl;

 private:
  explicit Prior(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

double marginal(const Prior& prior, TypeId t);
double posterior(const Prior& prior, TypeId observer, TypeId target);

}  // namespace netgame
