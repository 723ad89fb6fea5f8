#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace netgame {

inline constexpr int kMaxVertices = 16;
// Dense enumeration of every labeled graph stops here: 2^21 graphs at n = 7.
inline constexpr int kMaxEnumerationVertices = 7;
// Upper-triangle codes must fit in 64 bits: n(n-1)/2 <= 64.
inline constexpr int kMaxCodeVertices = 11;

using Edge = std::pair<int, int>;

/// Labeled undirected simple graph stored as one n-bit row mask per vertex.
///
/// Bit j of row i is set iff i ~ j. Rows are kept symmetric with a zero
/// diagonal; every mutating entry point enforces both.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  static Graph from_edges(int n, std::span<const Edge> edges);

  /// Graph whose upper-triangle code is `code`. Bit 0 is edge (0,1), then
  /// (0,2), ..., (0,n-1), (1,2), ... in row-major order.
  static Graph from_code(int n, std::uint64_t code);

  static Graph complete(int n);
  static Graph star(int n, int center = 0);
  /// Core-periphery graph whose core is the vertex set in `core_mask`.
  static Graph core_periphery(int n, std::uint32_t core_mask);

  int size() const { return n_; }
  std::size_t edge_count() const;

  bool has_edge(int i, int j) const;
  void add_edge(int i, int j);
  void remove_edge(int i, int j);

  /// Row i as an n-bit mask (bit j = g_ij).
  std::uint32_t row(int i) const;
  int degree(int i) const;
  std::vector<int> neighbors(int i) const;

  std::uint64_t code() const;

  bool operator==(const Graph&) const = default;

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  std::array<std::uint32_t, kMaxVertices> rows_{};
};

int degree(const Graph& g, int i);

struct AllGraphs {
  int n;
};
struct CorePeripheryGraphs {
  int n;
};
struct SingleGraph {
  Graph graph;
};
using GraphClass = std::variant<AllGraphs, CorePeripheryGraphs, SingleGraph>;

/// Streams every member of `cls` exactly once in ascending code order.
/// The callback returns false to stop early.
void for_each_graph(const GraphClass& cls,
                    const std::function<bool(const Graph&)>& visit);
std::vector<Graph> enumerate_graphs(const GraphClass& cls);
std::uint64_t class_size(const GraphClass& cls);

/// Number of walks of length s starting at i, d_i^(s) = sum_j (g^s)_ij.
/// Exact; throws std::overflow_error when the count leaves 64 bits.
std::uint64_t walk_count(const Graph& g, int i, int s);
/// Same quantity in floating point, for lengths where 64 bits overflow.
double walk_measure(const Graph& g, int i, int s);

double spectral_radius(const Graph& g);

enum class DecayBound {
  kUniform,   // lambda * (n-1) < 1
  kSpectral,  // lambda * rho(g) < 1
};

/// Solves (I - lambda g) b = 1.
std::vector<double> katz_bonacich(const Graph& g, double lambda,
                                  DecayBound bound = DecayBound::kUniform);

}  // namespace netgame
