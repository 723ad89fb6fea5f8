#include "netgame/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace netgame {

namespace {

void check_order(int n, int limit, const char* what) {
  if (n < 2 || n > limit) {
    throw std::length_error(std::string(what) + ": vertex count " +
                            std::to_string(n) + " outside [2, " +
                            std::to_string(limit) + "]");
  }
}

bool checked_add(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return !__builtin_add_overflow(a, b, &out);
}

}  // namespace

Graph::Graph(int n) : n_(n) {
  check_order(n, kMaxVertices, "Graph");
}

Graph Graph::from_edges(int n, std::span<const Edge> edges) {
  Graph g(n);
  for (const auto& [i, j] : edges) {
    g.add_edge(i, j);
  }
  return g;
}

Graph Graph::from_code(int n, std::uint64_t code) {
  check_order(n, kMaxCodeVertices, "Graph::from_code");
  const int pairs = n * (n - 1) / 2;
  if (pairs < 64 && (code >> pairs) != 0) {
    throw std::invalid_argument("graph code " + std::to_string(code) +
                                " has bits beyond the " +
                                std::to_string(pairs) + " vertex pairs");
  }
  Graph g(n);
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      if ((code >> bit) & 1u) {
        g.add_edge(i, j);
      }
    }
  }
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  const std::uint32_t all = (1u << n) - 1u;
  for (int i = 0; i < n; ++i) {
    g.rows_[i] = all & ~(1u << i);
  }
  return g;
}

Graph Graph::star(int n, int center) {
  Graph g(n);
  for (int v = 0; v < n; ++v) {
    if (v != center) g.add_edge(center, v);
  }
  return g;
}

Graph Graph::core_periphery(int n, std::uint32_t core_mask) {
  Graph g(n);
  if (core_mask >> n) {
    throw std::invalid_argument("core mask names vertices beyond n");
  }
  for (int i = 0; i < n; ++i) {
    if (!((core_mask >> i) & 1u)) continue;
    for (int j = 0; j < n; ++j) {
      if (j != i) g.add_edge(i, j);
    }
  }
  return g;
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) {
    throw std::out_of_range("vertex " + std::to_string(v) +
                            " out of range for n = " + std::to_string(n_));
  }
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (int i = 0; i < n_; ++i) {
    total += static_cast<std::size_t>(std::popcount(rows_[i]));
  }
  return total / 2;
}

bool Graph::has_edge(int i, int j) const {
  check_vertex(i);
  check_vertex(j);
  return (rows_[i] >> j) & 1u;
}

void Graph::add_edge(int i, int j) {
  check_vertex(i);
  check_vertex(j);
  if (i == j) {
    throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
  }
  rows_[i] |= 1u << j;
  rows_[j] |= 1u << i;
}

void Graph::remove_edge(int i, int j) {
  check_vertex(i);
  check_vertex(j);
  rows_[i] &= ~(1u << j);
  rows_[j] &= ~(1u << i);
}

std::uint32_t Graph::row(int i) const {
  check_vertex(i);
  return rows_[i];
}

int Graph::degree(int i) const { return std::popcount(row(i)); }

std::vector<int> Graph::neighbors(int i) const {
  std::vector<int> out;
  for (std::uint32_t r = row(i); r != 0; r &= r - 1) {
    out.push_back(std::countr_zero(r));
  }
  return out;
}

std::uint64_t Graph::code() const {
  if (n_ > kMaxCodeVertices) {
    throw std::length_error("graph code needs n <= " +
                            std::to_string(kMaxCodeVertices));
  }
  std::uint64_t code = 0;
  int bit = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j, ++bit) {
      if ((rows_[i] >> j) & 1u) code |= std::uint64_t{1} << bit;
    }
  }
  return code;
}

int degree(const Graph& g, int i) { return g.degree(i); }

std::uint64_t class_size(const GraphClass& cls) {
  if (const auto* all = std::get_if<AllGraphs>(&cls)) {
    check_order(all->n, kMaxEnumerationVertices, "AllGraphs");
    return std::uint64_t{1} << (all->n * (all->n - 1) / 2);
  }
  std::uint64_t count = 0;
  for_each_graph(cls, [&](const Graph&) {
    ++count;
    return true;
  });
  return count;
}

void for_each_graph(const GraphClass& cls,
                    const std::function<bool(const Graph&)>& visit) {
  if (const auto* all = std::get_if<AllGraphs>(&cls)) {
    check_order(all->n, kMaxEnumerationVertices, "AllGraphs");
    const std::uint64_t total = std::uint64_t{1}
                                << (all->n * (all->n - 1) / 2);
    for (std::uint64_t code = 0; code < total; ++code) {
      if (!visit(Graph::from_code(all->n, code))) return;
    }
    return;
  }
  if (const auto* cp = std::get_if<CorePeripheryGraphs>(&cls)) {
    const int n = cp->n;
    check_order(n, kMaxCodeVertices, "CorePeriphery");
    // Every core subset, deduplicated: a core of n-1 joined to the last
    // vertex is the complete graph again.
    std::vector<std::uint64_t> codes;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      codes.push_back(Graph::core_periphery(n, mask).code());
    }
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    for (auto code : codes) {
      if (!visit(Graph::from_code(n, code))) return;
    }
    return;
  }
  visit(std::get<SingleGraph>(cls).graph);
}

std::vector<Graph> enumerate_graphs(const GraphClass& cls) {
  std::vector<Graph> out;
  for_each_graph(cls, [&](const Graph& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

std::uint64_t walk_count(const Graph& g, int i, int s) {
  if (s < 0) throw std::invalid_argument("walk length must be >= 0");
  const int n = g.size();
  // x_j = number of length-t walks from i ending at j.
  std::vector<std::uint64_t> x(n, 0), next(n, 0);
  g.row(i);  // validates i
  x[i] = 1;
  for (int step = 0; step < s; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int v = 0; v < n; ++v) {
      if (x[v] == 0) continue;
      for (std::uint32_t r = g.row(v); r != 0; r &= r - 1) {
        const int u = std::countr_zero(r);
        if (!checked_add(next[u], x[v], next[u])) {
          throw std::overflow_error("walk count exceeds 64 bits at length " +
                                    std::to_string(step + 1));
        }
      }
    }
    x.swap(next);
  }
  std::uint64_t total = 0;
  for (auto c : x) {
    if (!checked_add(total, c, total)) {
      throw std::overflow_error("walk count exceeds 64 bits");
    }
  }
  return total;
}

double walk_measure(const Graph& g, int i, int s) {
  if (s < 0) throw std::invalid_argument("walk length must be >= 0");
  const int n = g.size();
  std::vector<double> x(n, 0.0), next(n, 0.0);
  g.row(i);
  x[i] = 1.0;
  for (int step = 0; step < s; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int v = 0; v < n; ++v) {
      for (std::uint32_t r = g.row(v); r != 0; r &= r - 1) {
        next[std::countr_zero(r)] += x[v];
      }
    }
    x.swap(next);
  }
  double total = 0.0;
  for (double c : x) total += c;
  return total;
}

double spectral_radius(const Graph& g) {
  const int n = g.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.has_edge(i, j)) a(i, j) = 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> katz_bonacich(const Graph& g, double lambda,
                                  DecayBound bound) {
  const int n = g.size();
  if (!(lambda >= 0.0)) {
    throw std::domain_error("decay must be nonnegative");
  }
  if (bound == DecayBound::kUniform) {
    if (lambda * (n - 1) >= 1.0) {
      throw std::domain_error("decay " + std::to_string(lambda) +
                              " violates lambda < 1/(n-1) = " +
                              std::to_string(1.0 / (n - 1)));
    }
  } else if (lambda * spectral_radius(g) >= 1.0 - 1e-12) {
    // The eigensolver carries rounding error of order n * eps, so a product
    // within 1e-12 of 1 counts as the boundary.
    throw std::domain_error("decay " + std::to_string(lambda) +
                            " violates lambda * rho(g) < 1");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t r = g.row(i); r != 0; r &= r - 1) {
      m(i, std::countr_zero(r)) -= lambda;
    }
  }
  const Eigen::VectorXd b =
      m.partialPivLu().solve(Eigen::VectorXd::Ones(n));
  return {b.data(), b.data() + n};
}

}  // namespace netgame
