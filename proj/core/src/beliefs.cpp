#include "netgame/beliefs.hpp"

#include <algorithm>
#include <stdexcept>

namespace netgame {

std::vector<std::uint32_t> reduced_type_set(const Prior& prior, int player) {
  const int n = prior.size();
  if (player < 0 || player >= n) {
    throw std::out_of_range("player out of range");
  }
  std::vector<std::uint32_t> codes;
  for (std::uint32_t c = 0; c < type_count(n); ++c) {
    if (prior.marginal({player, c}) > kProbabilityTolerance) {
      codes.push_back(c);
    }
  }
  return codes;
}

std::vector<TypeId> support_types(const Prior& prior) {
  std::vector<TypeId> out;
  for (int i = 0; i < prior.size(); ++i) {
    for (std::uint32_t c : reduced_type_set(prior, i)) out.push_back({i, c});
  }
  return out;
}

double expected_neighbor_degree(const Prior& prior, TypeId observer,
                                int hop) {
  if (hop < 1) throw std::invalid_argument("hop must be >= 1");
  const int n = prior.size();
  if (prior.marginal(observer) <= kProbabilityTolerance) {
    throw std::invalid_argument("observer type has zero probability");
  }
  if (type_degree(observer) == 0) {
    throw std::invalid_argument("observer has no neighbors");
  }

  const std::size_t total = static_cast<std::size_t>(n) * type_count(n);
  std::vector<double> mass(total, 0.0);
  std::vector<double> next(total, 0.0);

  // Mass on (j, t_j) after one link: g_ij * p(t_j | t_i).
  auto spread = [&](TypeId from, double weight, std::vector<double>& into) {
    const std::uint32_t row = type_row(from.player, from.code, n);
    for (const auto& e : prior.posterior_row(from)) {
      if ((row >> e.target.player) & 1u) {
        into[flat_index(e.target, n)] += weight * e.probability;
      }
    }
  };

  spread(observer, 1.0, mass);
  for (int w = 1; w < hop; ++w) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t f = 0; f < total; ++f) {
      if (mass[f] > 0.0) spread(type_at(f, n), mass[f], next);
    }
    mass.swap(next);
  }

  double weight = 0.0;
  double weighted_degree = 0.0;
  for (std::size_t f = 0; f < total; ++f) {
    if (mass[f] <= 0.0) continue;
    weight += mass[f];
    weighted_degree += mass[f] * type_degree(type_at(f, n));
  }
  if (weight <= 0.0) {
    throw std::invalid_argument("no walk of the requested length");
  }
  return weighted_degree / weight;
}

}  // namespace netgame
