#pragma once

#include <cstdint>
#include <vector>

#include "netgame/prior.hpp"

namespace netgame {

/// Codes of player i with positive marginal, ascending. Solving on these
/// alone gives the same on-support equilibrium as the full type space.
std::vector<std::uint32_t> reduced_type_set(const Prior& prior, int player);

/// Every positive-marginal type of every player, ordered by flat index.
std::vector<TypeId> support_types(const Prior& prior);

/// Interim expected degree of a contact reached by a w-hop walk from
/// `observer`, with beliefs chained one link at a time: the hop-1 contact is
/// weighted by the observer's posterior, the hop-2 contact by the hop-1
/// contact's posterior, and so on.
///
/// Equals beta^(w+1) / beta^(w) for the observer's row. Throws
/// std::invalid_argument for a zero-marginal or isolated observer.
double expected_neighbor_degree(const Prior& prior, TypeId observer, int hop);

}  // namespace netgame
