#include "netgame/prior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace netgame {

const char* to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::kTable:
      return "table";
    case PriorKind::kUniform:
      return "uniform";
    case PriorKind::kCorePeripheryUniform:
      return "cp_uniform";
    case PriorKind::kPointMass:
      return "point_mass";
    case PriorKind::kIndependentLinks:
      return "independent";
    case PriorKind::kStochasticBlock:
      return "stochastic_block";
  }
  return "unknown";
}

int BlockModel::players() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

int BlockModel::group_of(int player) const {
  int upper = 0;
  for (int k = 0; k < groups(); ++k) {
    upper += sizes[k];
    if (player < upper) return k;
  }
  throw std::out_of_range("player " + std::to_string(player) +
                          " is not in any block");
}

void BlockModel::validate() const {
  if (sizes.empty()) throw std::invalid_argument("block model has no groups");
  if (within.size() != sizes.size()) {
    throw std::invalid_argument(
        "block model needs one within-group probability per group");
  }
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("block sizes must be >= 1");
  }
  const int n = players();
  if (n < 2 || n > kMaxVertices) {
    throw std::length_error("block model covers " + std::to_string(n) +
                            " players; need 2..16");
  }
  if (!(across >= 0.0 && across <= 1.0)) {
    throw std::invalid_argument("across-group probability outside [0,1]");
  }
  for (double p : within) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("within-group probability outside [0,1]");
    }
    if (p < across) {
      throw std::invalid_argument(
          "within-group probability must be >= across-group probability");
    }
  }
}

struct Prior::Impl {
  PriorKind kind = PriorKind::kTable;
  int n = 0;

  // Dense kinds. Uniform and core-periphery regenerate their support.
  std::vector<std::pair<Graph, double>> stored;
  std::vector<double> marginals;
  std::vector<std::vector<PosteriorEntry>> rows;
  std::vector<double> link_frequency;

  // Factored kinds.
  std::vector<double> pi;
  std::optional<BlockModel> block;

  bool factored() const {
    return kind == PriorKind::kIndependentLinks ||
           kind == PriorKind::kStochasticBlock;
  }

  double link(int i, int j) const {
    return pi[static_cast<std::size_t>(i) * n + j];
  }

  double link_factor(int i, int j, bool present) const {
    const double p = link(i, j);
    return present ? p : 1.0 - p;
  }

  void for_each_support(
      const std::function<void(const Graph&, double)>& visit) const;
  double factored_marginal(TypeId t) const;
  double factored_posterior(TypeId observer, TypeId target) const;
  void build_tables();
};

void Prior::Impl::for_each_support(
    const std::function<void(const Graph&, double)>& visit) const {
  switch (kind) {
    case PriorKind::kUniform: {
      const double mass =
          std::ldexp(1.0, -(n * (n - 1) / 2));
      for_each_graph(AllGraphs{n}, [&](const Graph& g) {
        visit(g, mass);
        return true;
      });
      return;
    }
    case PriorKind::kCorePeripheryUniform: {
      const auto members = enumerate_graphs(CorePeripheryGraphs{n});
      const double mass = 1.0 / static_cast<double>(members.size());
      for (const auto& g : members) visit(g, mass);
      return;
    }
    case PriorKind::kIndependentLinks:
    case PriorKind::kStochasticBlock:
      for_each_graph(AllGraphs{n}, [&](const Graph& g) {
        double mass = 1.0;
        for (int i = 0; i < n && mass > 0.0; ++i) {
          for (int j = i + 1; j < n; ++j) {
            mass *= link_factor(i, j, g.has_edge(i, j));
          }
        }
        if (mass > 0.0) visit(g, mass);
        return true;
      });
      return;
    default:
      for (const auto& [g, mass] : stored) visit(g, mass);
  }
}

double Prior::Impl::factored_marginal(TypeId t) const {
  const std::uint32_t row = type_row(t.player, t.code, n);
  double p = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j == t.player) continue;
    p *= link_factor(t.player, j, (row >> j) & 1u);
  }
  return p;
}

double Prior::Impl::factored_posterior(TypeId observer, TypeId target) const {
  // Links are independent, so only the target's links away from the
  // observer carry uncertainty.
  const std::uint32_t row = type_row(target.player, target.code, n);
  double p = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k == target.player || k == observer.player) continue;
    p *= link_factor(target.player, k, (row >> k) & 1u);
  }
  return p;
}

void Prior::Impl::build_tables() {
  const std::uint32_t gamma = type_count(n);
  const std::size_t total = static_cast<std::size_t>(n) * gamma;
  marginals.assign(total, 0.0);
  link_frequency.assign(static_cast<std::size_t>(n) * n, 0.0);
  rows.assign(total, {});

  const bool dense_joint = n <= kMaxEnumerationVertices;
  std::vector<double> joint;
  std::unordered_map<std::uint64_t, double> sparse_joint;
  if (dense_joint) {
    joint.assign(static_cast<std::size_t>(n) * n * gamma * gamma, 0.0);
  }

  std::vector<std::uint32_t> codes(n);
  for_each_support([&](const Graph& g, double mass) {
    for (int i = 0; i < n; ++i) {
      codes[i] = row_to_type(i, g.row(i), n);
      marginals[static_cast<std::size_t>(i) * gamma + codes[i]] += mass;
      for (std::uint32_t r = g.row(i); r != 0; r &= r - 1) {
        link_frequency[static_cast<std::size_t>(i) * n + std::countr_zero(r)] +=
            mass;
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (dense_joint) {
          joint[((static_cast<std::size_t>(i) * n + j) * gamma + codes[i]) *
                    gamma +
                codes[j]] += mass;
        } else {
          const std::uint64_t from =
              static_cast<std::uint64_t>(i) * gamma + codes[i];
          const std::uint64_t to =
              static_cast<std::uint64_t>(j) * gamma + codes[j];
          sparse_joint[from * total + to] += mass;
        }
      }
    }
  });

  auto marginal_of = [&](std::size_t flat) { return marginals[flat]; };
  if (dense_joint) {
    for (int i = 0; i < n; ++i) {
      for (std::uint32_t ci = 0; ci < gamma; ++ci) {
        const std::size_t from = static_cast<std::size_t>(i) * gamma + ci;
        const double m = marginal_of(from);
        if (m <= kProbabilityTolerance) continue;
        auto& row = rows[from];
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          const double* block =
              &joint[((static_cast<std::size_t>(i) * n + j) * gamma + ci) *
                     gamma];
          for (std::uint32_t cj = 0; cj < gamma; ++cj) {
            if (block[cj] > 0.0) {
              row.push_back({TypeId{j, cj}, block[cj] / m});
            }
          }
        }
      }
    }
    return;
  }
  for (const auto& [key, mass] : sparse_joint) {
    const std::size_t from = key / total;
    const std::size_t to = key % total;
    const double m = marginal_of(from);
    if (m <= kProbabilityTolerance || mass <= 0.0) continue;
    rows[from].push_back({type_at(to, n), mass / m});
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const PosteriorEntry& a, const PosteriorEntry& b) {
                return a.target < b.target;
              });
  }
}

namespace {

void check_players(int n) {
  if (n < 2 || n > kMaxVertices) {
    throw std::length_error("prior over " + std::to_string(n) +
                            " players; need 2..16");
  }
}

}  // namespace

Prior::Prior(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Prior Prior::uniform(int n) {
  if (n < 2 || n > kMaxEnumerationVertices) {
    throw std::length_error("uniform prior needs 2 <= n <= 7");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kUniform;
  impl->n = n;
  impl->build_tables();
  return Prior(std::move(impl));
}

Prior Prior::core_periphery_uniform(int n) {
  if (n < 2 || n > kMaxCodeVertices) {
    throw std::length_error("core-periphery prior needs 2 <= n <= 11");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kCorePeripheryUniform;
  impl->n = n;
  impl->build_tables();
  return Prior(std::move(impl));
}

Prior Prior::point_mass(const Graph& g) {
  check_players(g.size());
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kPointMass;
  impl->n = g.size();
  impl->stored.emplace_back(g, 1.0);
  impl->build_tables();
  return Prior(std::move(impl));
}

Prior Prior::table(int n,
                   std::vector<std::pair<std::uint64_t, double>> masses) {
  if (n < 2 || n > kMaxCodeVertices) {
    throw std::length_error("table prior needs 2 <= n <= 11");
  }
  std::vector<std::pair<Graph, double>> graphs;
  graphs.reserve(masses.size());
  for (const auto& [code, mass] : masses) {
    graphs.emplace_back(Graph::from_code(n, code), mass);
  }
  auto prior = from_graphs(std::move(graphs));
  return prior;
}

Prior Prior::from_graphs(std::vector<std::pair<Graph, double>> masses) {
  if (masses.empty()) throw std::invalid_argument("prior table is empty");
  const int n = masses.front().first.size();
  check_players(n);
  double sum = 0.0;
  for (const auto& [g, mass] : masses) {
    if (g.size() != n) {
      throw std::invalid_argument("prior table mixes vertex counts");
    }
    if (!(mass >= 0.0)) {
      throw std::invalid_argument("prior masses must be nonnegative");
    }
    sum += mass;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("prior masses sum to " +
                                std::to_string(sum) + ", not 1");
  }
  std::sort(masses.begin(), masses.end(), [](const auto& a, const auto& b) {
    for (int i = 0; i < a.first.size(); ++i) {
      if (a.first.row(i) != b.first.row(i)) {
        return a.first.row(i) < b.first.row(i);
      }
    }
    return false;
  });
  for (std::size_t k = 1; k < masses.size(); ++k) {
    if (masses[k].first == masses[k - 1].first) {
      throw std::invalid_argument("prior table lists a graph twice");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kTable;
  impl->n = n;
  for (auto& entry : masses) {
    if (entry.second > kProbabilityTolerance) {
      impl->stored.push_back(std::move(entry));
    }
  }
  impl->build_tables();
  return Prior(std::move(impl));
}

Prior Prior::independent_links(int n, std::vector<double> pi) {
  check_players(n);
  if (pi.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("link probability matrix must be n*n");
  }
  for (int i = 0; i < n; ++i) {
    if (pi[static_cast<std::size_t>(i) * n + i] != 0.0) {
      throw std::invalid_argument("link probabilities need a zero diagonal");
    }
    for (int j = 0; j < n; ++j) {
      const double p = pi[static_cast<std::size_t>(i) * n + j];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("link probability outside [0,1]");
      }
      if (p != pi[static_cast<std::size_t>(j) * n + i]) {
        throw std::invalid_argument("link probabilities must be symmetric");
      }
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kIndependentLinks;
  impl->n = n;
  impl->pi = std::move(pi);
  return Prior(std::move(impl));
}

Prior Prior::stochastic_block(BlockModel model) {
  model.validate();
  const int n = model.players();
  std::vector<double> pi(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int gi = model.group_of(i);
      pi[static_cast<std::size_t>(i) * n + j] =
          gi == model.group_of(j) ? model.within[gi] : model.across;
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kStochasticBlock;
  impl->n = n;
  impl->pi = std::move(pi);
  impl->block = std::move(model);
  return Prior(std::move(impl));
}

PriorKind Prior::kind() const { return impl_->kind; }
int Prior::size() const { return impl_->n; }
bool Prior::factored() const { return impl_->factored(); }

double Prior::link_probability(int i, int j) const {
  const int n = impl_->n;
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::out_of_range("link index out of range");
  }
  if (impl_->factored()) return impl_->link(i, j);
  return impl_->link_frequency[static_cast<std::size_t>(i) * n + j];
}

const BlockModel& Prior::block_model() const {
  if (!impl_->block) {
    throw std::logic_error("prior is not a stochastic block model");
  }
  return *impl_->block;
}

void Prior::for_each_support(
    const std::function<void(const Graph&, double)>& visit) const {
  if (impl_->factored() && impl_->n > kMaxEnumerationVertices) {
    throw std::length_error(
        "support enumeration of a factored prior needs n <= 7");
  }
  impl_->for_each_support(visit);
}

double Prior::marginal(TypeId t) const {
  const int n = impl_->n;
  type_row(t.player, t.code, n);
  if (impl_->factored()) return impl_->factored_marginal(t);
  return impl_->marginals[flat_index(t, n)];
}

double Prior::posterior(TypeId observer, TypeId target) const {
  const int n = impl_->n;
  if (observer.player == target.player) {
    throw std::invalid_argument("posterior of a player about itself");
  }
  const std::uint32_t obs_row = type_row(observer.player, observer.code, n);
  const std::uint32_t tgt_row = type_row(target.player, target.code, n);
  if (marginal(observer) <= kProbabilityTolerance) return 0.0;
  if (((obs_row >> target.player) & 1u) != ((tgt_row >> observer.player) & 1u)) {
    return 0.0;
  }
  if (impl_->factored()) return impl_->factored_posterior(observer, target);
  const auto& row = impl_->rows[flat_index(observer, n)];
  auto it = std::lower_bound(
      row.begin(), row.end(), target,
      [](const PosteriorEntry& e, const TypeId& t) { return e.target < t; });
  if (it != row.end() && it->target == target) return it->probability;
  return 0.0;
}

std::vector<PosteriorEntry> Prior::posterior_row(TypeId observer) const {
  const int n = impl_->n;
  const std::uint32_t obs_row = type_row(observer.player, observer.code, n);
  if (!impl_->factored()) return impl_->rows[flat_index(observer, n)];
  std::vector<PosteriorEntry> out;
  if (marginal(observer) <= kProbabilityTolerance) return out;
  const std::uint32_t gamma = type_count(n);
  for (int j = 0; j < n; ++j) {
    if (j == observer.player) continue;
    const std::uint32_t shared = (obs_row >> j) & 1u;
    for (std::uint32_t c = 0; c < gamma; ++c) {
      const TypeId target{j, c};
      if (((type_row(j, c, n) >> observer.player) & 1u) != shared) continue;
      const double p = impl_->factored_posterior(observer, target);
      if (p > 0.0) out.push_back({target, p});
    }
  }
  return out;
}

Prior Prior::expanded() const {
  if (!impl_->factored()) return *this;
  if (impl_->n > kMaxEnumerationVertices) {
    throw std::length_error("expanding a factored prior needs n <= 7");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = PriorKind::kTable;
  impl->n = impl_->n;
  impl_->for_each_support([&](const Graph& g, double mass) {
    impl->stored.emplace_back(g, mass);
  });
  impl->build_tables();
  return Prior(std::move(impl));
}

double marginal(const Prior& prior, TypeId t) { return prior.marginal(t); }

double posterior(const Prior& prior, TypeId observer, TypeId target) {
  return prior.posterior(observer, target);
}

}  // namespace netgame
