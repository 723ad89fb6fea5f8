#include "netgame/block_system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "netgame/beliefs.hpp"
#include "parallel.hpp"

namespace netgame {

void check_lambda(double lambda, int n) {
  if (!(lambda >= 0.0) || !(lambda * (n - 1) < 1.0)) {
    throw std::domain_error("lambda = " + std::to_string(lambda) +
                            " outside [0, 1/(n-1)) for n = " +
                            std::to_string(n));
  }
}

struct BlockSystem::Impl {
  Prior prior;
  int n = 0;
  double lambda = 0.0;
  bool matrix_free = false;
  bool reduced = false;

  std::vector<TypeId> types;
  std::vector<char> support;
  std::vector<std::size_t> row_index;  // flat index -> row

  // Stored mode: compressed sparse rows, columns ascending.
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> columns;
  std::vector<double> values;

  // Matrix-free mode. weights[(j*n + i)*gamma + t_j] is the probability of
  // t_j's links away from i, which is p(t_j | t_i) for any t_i linked to j.
  std::vector<double> weights;

  explicit Impl(Prior p) : prior(std::move(p)) {}

  std::uint32_t gamma() const { return type_count(n); }

  double matrix_free_entry(std::size_t row, std::size_t col) const {
    if (!support[row]) return 0.0;
    const TypeId a = types[row];
    const TypeId b = types[col];
    if (a.player == b.player) return 0.0;
    if (!links_to(a, b.player, n) || !links_to(b, a.player, n)) return 0.0;
    return weights[(static_cast<std::size_t>(b.player) * n + a.player) *
                       gamma() +
                   b.code];
  }
};

BlockSystem::BlockSystem(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

BlockSystem BlockSystem::build(const Prior& prior, double lambda,
                               BlockOptions options) {
  const int n = prior.size();
  check_lambda(lambda, n);
  const bool reduced = options.space == TypeSpace::kReduced;

  bool matrix_free = false;
  switch (options.mode) {
    case BlockMode::kAuto:
      matrix_free = n > kMaxDenseBlockVertices && prior.factored() && !reduced;
      break;
    case BlockMode::kStored:
      break;
    case BlockMode::kMatrixFree:
      if (!prior.factored()) {
        throw std::invalid_argument(
            "matrix-free mode needs an independent-link or block prior");
      }
      if (reduced) {
        throw std::invalid_argument(
            "matrix-free mode works on the full type space only");
      }
      matrix_free = true;
      break;
  }
  if (matrix_free && n > kMaxMatrixFreeVertices) {
    throw std::length_error("matrix-free mode supports n <= 12, got n = " +
                            std::to_string(n));
  }
  if (!matrix_free && n > kMaxDenseBlockVertices &&
      (!reduced || prior.factored())) {
    throw std::length_error(
        "stored block system needs n <= 7 (got n = " + std::to_string(n) +
        "); use matrix-free mode with a factored prior, or the reduced type "
        "space with a table prior");
  }

  auto impl = std::make_shared<Impl>(prior);
  impl->n = n;
  impl->lambda = lambda;
  impl->matrix_free = matrix_free;
  impl->reduced = reduced;

  const std::uint32_t gamma = type_count(n);
  const std::size_t total = static_cast<std::size_t>(n) * gamma;
  if (reduced) {
    impl->types = support_types(prior);
    impl->support.assign(impl->types.size(), 1);
  } else {
    impl->types.reserve(total);
    impl->support.reserve(total);
    for (std::size_t f = 0; f < total; ++f) {
      const TypeId t = type_at(f, n);
      impl->types.push_back(t);
      impl->support.push_back(prior.marginal(t) > kProbabilityTolerance);
    }
  }
  const std::size_t dim = impl->types.size();
  impl->row_index.assign(total, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    impl->row_index[flat_index(impl->types[r], n)] = r;
  }

  if (matrix_free) {
    impl->weights.assign(static_cast<std::size_t>(n) * n * gamma, 0.0);
    for (int j = 0; j < n; ++j) {
      for (std::uint32_t c = 0; c < gamma; ++c) {
        const std::uint32_t row = type_row(j, c, n);
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          double w = 1.0;
          for (int k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            const double p = prior.link_probability(j, k);
            w *= ((row >> k) & 1u) ? p : 1.0 - p;
          }
          impl->weights[(static_cast<std::size_t>(j) * n + i) * gamma + c] = w;
        }
      }
    }
    return BlockSystem(std::move(impl));
  }

  impl->offsets.assign(dim + 1, 0);
  for (std::size_t r = 0; r < dim; ++r) {
    if (impl->support[r]) {
      const TypeId t = impl->types[r];
      const std::uint32_t row = type_row(t.player, t.code, n);
      for (const auto& e : prior.posterior_row(t)) {
        if (!((row >> e.target.player) & 1u)) continue;
        const std::size_t col = impl->row_index[flat_index(e.target, n)];
        if (col == dim) continue;
        impl->columns.push_back(col);
        impl->values.push_back(e.probability);
      }
    }
    impl->offsets[r + 1] = impl->columns.size();
  }
  return BlockSystem(std::move(impl));
}

const Prior& BlockSystem::prior() const { return impl_->prior; }
int BlockSystem::players() const { return impl_->n; }
double BlockSystem::lambda() const { return impl_->lambda; }
std::size_t BlockSystem::dimension() const { return impl_->types.size(); }
bool BlockSystem::matrix_free() const { return impl_->matrix_free; }
bool BlockSystem::reduced() const { return impl_->reduced; }
const std::vector<TypeId>& BlockSystem::types() const { return impl_->types; }

bool BlockSystem::on_support(std::size_t row) const {
  return impl_->support.at(row) != 0;
}

std::size_t BlockSystem::row_of(TypeId t) const {
  const int n = impl_->n;
  if (t.player < 0 || t.player >= n || t.code >= type_count(n)) {
    return dimension();
  }
  return impl_->row_index[flat_index(t, n)];
}

double BlockSystem::entry(std::size_t row, std::size_t col) const {
  if (row >= dimension() || col >= dimension()) {
    throw std::out_of_range("block entry out of range");
  }
  if (impl_->matrix_free) return impl_->matrix_free_entry(row, col);
  const auto begin = impl_->columns.begin() + impl_->offsets[row];
  const auto end = impl_->columns.begin() + impl_->offsets[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return impl_->values[it - impl_->columns.begin()];
}

double BlockSystem::row_sum(std::size_t row) const {
  if (row >= dimension()) throw std::out_of_range("block row out of range");
  if (impl_->matrix_free) {
    double sum = 0.0;
    for (std::size_t col = 0; col < dimension(); ++col) {
      sum += impl_->matrix_free_entry(row, col);
    }
    return sum;
  }
  double sum = 0.0;
  for (std::size_t k = impl_->offsets[row]; k < impl_->offsets[row + 1]; ++k) {
    sum += impl_->values[k];
  }
  return sum;
}

void BlockSystem::apply(std::span<const double> x, std::span<double> y,
                        int threads) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) {
    throw std::invalid_argument("vector length does not match block system");
  }
  const Impl& s = *impl_;

  if (!s.matrix_free) {
    detail::parallel_for(dim, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        double acc = 0.0;
        for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k) {
          acc += s.values[k] * x[s.columns[k]];
        }
        y[r] = acc;
      }
    });
    return;
  }

  // h[j*n + i] = sum over t_j linked to i of p(t_j | i linked to j) x(t_j).
  const int n = s.n;
  const std::uint32_t gamma = s.gamma();
  std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
  detail::parallel_for(
      static_cast<std::size_t>(n) * n, threads,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t pair = lo; pair < hi; ++pair) {
          const int j = static_cast<int>(pair / n);
          const int i = static_cast<int>(pair % n);
          if (i == j) continue;
          const std::uint32_t bit = i < j ? i : i - 1;
          const double* w = &s.weights[pair * gamma];
          const double* xj = &x[static_cast<std::size_t>(j) * gamma];
          double acc = 0.0;
          for (std::uint32_t c = 0; c < gamma; ++c) {
            if ((c >> bit) & 1u) acc += w[c] * xj[c];
          }
          h[pair] = acc;
        }
      });
  detail::parallel_for(dim, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      if (!s.support[r]) {
        y[r] = 0.0;
        continue;
      }
      const TypeId t = s.types[r];
      const std::uint32_t row = type_row(t.player, t.code, n);
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if ((row >> j) & 1u) {
          acc += h[static_cast<std::size_t>(j) * n + t.player];
        }
      }
      y[r] = acc;
    }
  });
}

std::vector<double> BlockSystem::dense() const {
  const std::size_t dim = dimension();
  if (dim > 4096) {
    throw std::length_error("dense copy limited to 4096 rows, system has " +
                            std::to_string(dim));
  }
  std::vector<double> out(dim * dim, 0.0);
  if (impl_->matrix_free) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        out[r * dim + c] = impl_->matrix_free_entry(r, c);
      }
    }
    return out;
  }
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = impl_->offsets[r]; k < impl_->offsets[r + 1]; ++k) {
      out[r * dim + impl_->columns[k]] = impl_->values[k];
    }
  }
  return out;
}

}  // namespace netgame
