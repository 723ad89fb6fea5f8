#include "netgame/types.hpp"

#include <bit>
#include <stdexcept>

#include "netgame/graph.hpp"

namespace netgame {

namespace {

void check(int player, int n) {
  if (n < 2 || n > kMaxVertices) {
    throw std::length_error("vertex count " + std::to_string(n) +
                            " outside [2, 16]");
  }
  if (player < 0 || player >= n) {
    throw std::out_of_range("player " + std::to_string(player) +
                            " out of range for n = " + std::to_string(n));
  }
}

}  // namespace

std::uint32_t type_count(int n) { return 1u << (n - 1); }

std::uint32_t type_row(int player, std::uint32_t code, int n) {
  check(player, n);
  if (code >= type_count(n)) {
    throw std::out_of_range("type code " + std::to_string(code) +
                            " exceeds 2^(n-1)");
  }
  const std::uint32_t low_mask = (1u << player) - 1u;
  return (code & low_mask) | ((code & ~low_mask) << 1);
}

std::uint32_t row_to_type(int player, std::uint32_t row, int n) {
  check(player, n);
  if ((row >> player) & 1u) {
    throw std::invalid_argument("row has a self-loop bit");
  }
  if (row >> n) {
    throw std::invalid_argument("row has bits beyond n");
  }
  const std::uint32_t low_mask = (1u << player) - 1u;
  return (row & low_mask) | ((row >> 1) & ~low_mask);
}

std::size_t flat_index(TypeId t, int n) {
  return static_cast<std::size_t>(t.player) * type_count(n) + t.code;
}

TypeId type_at(std::size_t flat, int n) {
  const std::size_t gamma = type_count(n);
  return {static_cast<int>(flat / gamma),
          static_cast<std::uint32_t>(flat % gamma)};
}

bool links_to(TypeId t, int other, int n) {
  return (type_row(t.player, t.code, n) >> other) & 1u;
}

int type_degree(TypeId t) { return std::popcount(t.code); }

std::string type_bits(TypeId t, int n) {
  const std::uint32_t row = type_row(t.player, t.code, n);
  std::string out(static_cast<std::size_t>(n), '0');
  for (int j = 0; j < n; ++j) {
    if ((row >> j) & 1u) out[j] = '1';
  }
  return out;
}

}  // namespace netgame
