#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace netgame {

/// One element of a player's type set: the player's own adjacency row.
///
/// `code` packs the n-1 off-diagonal entries of the row. Bit b of the code
/// is g_ij for the b-th element of the ascending list of j != i.
struct TypeId {
  int player = 0;
  std::uint32_t code = 0;

  auto operator<=>(const TypeId&) const = default;
};

/// Types per player, 2^(n-1).
std::uint32_t type_count(int n);

/// n-bit row mask (bit j = g_ij, bit i clear) for the given type code.
std::uint32_t type_row(int player, std::uint32_t code, int n);
/// Inverse of type_row. The diagonal bit must be clear.
std::uint32_t row_to_type(int player, std::uint32_t row, int n);

/// Row-major flat index (player, code) -> player * 2^(n-1) + code.
std::size_t flat_index(TypeId t, int n);
TypeId type_at(std::size_t flat, int n);

bool links_to(TypeId t, int other, int n);
int type_degree(TypeId t);

/// The row written as n characters, e.g. "100" for player 1 linked to 0.
std::string type_bits(TypeId t, int n);

}  // namespace netgame
