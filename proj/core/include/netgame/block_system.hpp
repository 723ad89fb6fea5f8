#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "netgame/prior.hpp"

namespace netgame {

/// Largest n for which the full type space is stored row by row.
inline constexpr int kMaxDenseBlockVertices = 7;
/// Largest n handled by matrix-free evaluation of factored priors.
inline constexpr int kMaxMatrixFreeVertices = 12;

enum class BlockMode {
  kAuto,        // stored rows up to n = 7, matrix-free above for factored priors
  kStored,      // explicit sparse rows
  kMatrixFree,  // factored priors only; rows recomputed on every product
};

enum class TypeSpace {
  kFull,     // every code of every player, zero rows off support
  kReduced,  // positive-marginal codes only
};

struct BlockOptions {
  BlockMode mode = BlockMode::kAuto;
  TypeSpace space = TypeSpace::kFull;
};

/// Throws std::domain_error unless 0 <= lambda < 1/(n-1).
void check_lambda(double lambda, int n);

/// Posterior-weighted type adjacency B with entries
/// B[(i,t_i),(j,t_j)] = g_ij^{t_i} p(t_j | t_i), together with lambda.
///
/// Rows are ordered by flat index. Types with zero marginal have zero rows
/// in the full space and are absent from the reduced space. Immutable after
/// build; products may be split over worker threads and are bit-identical
/// for any thread count.
class BlockSystem {
 public:
  static BlockSystem build(const Prior& prior, double lambda,
                           BlockOptions options = {});

  const Prior& prior() const;
  int players() const;
  double lambda() const;
  std::size_t dimension() const;
  bool matrix_free() const;
  bool reduced() const;

  /// Type of each row (and column).
  const std::vector<TypeId>& types() const;
  bool on_support(std::size_t row) const;
  /// Row of `t`, or dimension() when `t` is not in this type space.
  std::size_t row_of(TypeId t) const;

  double entry(std::size_t row, std::size_t col) const;
  double row_sum(std::size_t row) const;

  /// y = B x.
  void apply(std::span<const double> x, std::span<double> y,
             int threads = 1) const;

  /// Row-major dimension() x dimension() copy of B.
  std::vector<double> dense() const;

  struct Impl;

 private:
  explicit BlockSystem(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace netgame
