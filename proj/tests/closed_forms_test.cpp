#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <stdexcept>

#include "netgame/block_system.hpp"
#include "netgame/closed_forms.hpp"
#include "netgame/solver.hpp"
#include "oracle/brute_force.hpp"

using namespace netgame;

namespace {

Graph cp_graph(int n, int n_co) {
  return Graph::core_periphery(n, (1u << n_co) - 1u);
}

ActionProfile full_solve(const Prior& prior, double lambda) {
  return solve_direct(BlockSystem::build(prior, lambda));
}

}  // namespace

TEST(CpCompleteInfo, EmptyCoreAndStar) {
  const CpActions empty = cp_complete_info(0, 5, 0.2);
  EXPECT_FALSE(empty.core.has_value());
  EXPECT_DOUBLE_EQ(*empty.periphery, 1.0);

  const CpActions star = cp_complete_info(1, 4, 0.2);
  EXPECT_NEAR(*star.core, 15.0 / 7.0, 1e-14);
  EXPECT_NEAR(*star.periphery, 10.0 / 7.0, 1e-14);
  const auto kb = katz_bonacich(Graph::star(5), 0.2);
  EXPECT_NEAR(*star.core, kb[0], 1e-12);
  EXPECT_NEAR(*star.periphery, kb[1], 1e-12);
}

TEST(CpCompleteInfo, CompleteGraphCollapse) {
  for (int n = 3; n <= 8; ++n) {
    const double lambda = 0.6 / (n - 1);
    const double expected = 1.0 / (1.0 - lambda * (n - 1));
    EXPECT_NEAR(*cp_complete_info(n, 0, lambda).core, expected, 1e-12);
    // A core of n-1 is the same graph.
    const CpActions a = cp_complete_info(n - 1, 1, lambda);
    EXPECT_NEAR(*a.core, expected, 1e-12);
    EXPECT_FALSE(a.periphery.has_value());
  }
}

TEST(CpCompleteInfo, MatchesKatzBonacichOnExplicitGraphs) {
  for (int n = 3; n <= 9; ++n) {
    const double lambda = 0.9 / (n - 1);
    for (int n_co = 1; n_co <= n - 2; ++n_co) {
      const CpActions a = cp_complete_info(n_co, n - n_co, lambda);
      const auto kb = katz_bonacich(cp_graph(n, n_co), lambda);
      EXPECT_NEAR(*a.core, kb[0], 1e-10);
      EXPECT_NEAR(*a.periphery, kb[n - 1], 1e-10);
      const CpActions e = cp_efficient(n_co, n - n_co, 0.5 * lambda);
      const auto eff = efficient_actions(cp_graph(n, n_co), 0.5 * lambda);
      EXPECT_NEAR(*e.core, eff[0], 1e-10);
      EXPECT_NEAR(*e.periphery, eff[n - 1], 1e-10);
    }
  }
  EXPECT_THROW(cp_complete_info(2, 3, 0.25), std::domain_error);
}

TEST(CpEfficient, ExistsAtUniformBoundaryUnlessComplete) {
  // 2 lambda (n-1) = 1 still leaves 2 lambda rho < 1 off the complete graph.
  const int n = 8;
  const double lambda = 0.5 / (n - 1);
  for (int n_co = 1; n_co <= n - 2; ++n_co) {
    const CpActions e = cp_efficient(n_co, n - n_co, lambda);
    const auto kb = katz_bonacich(cp_graph(n, n_co), 2 * lambda, DecayBound::kSpectral);
    EXPECT_NEAR(*e.core, kb[0], 1e-9);
  }
  EXPECT_THROW(cp_efficient(n - 1, 1, lambda), std::domain_error);
}

TEST(CpExpectations, FiveVertexValues) {
  const CpExpectations e = cp_expectations(5);
  EXPECT_EQ(e.x_sum, 7u);
  EXPECT_EQ(e.z_sum, 5u);
  EXPECT_EQ(e.y_sum, 16u);
  EXPECT_EQ(e.denom, 12u);
  EXPECT_EQ(e.scale, 4u);
  EXPECT_NEAR(e.x(), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.z(), 5.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.y(), 16.0 / 3.0, 1e-15);
  EXPECT_NEAR(e.x() + e.z(), 4.0, 1e-15);
  EXPECT_THROW(cp_expectations(3), std::invalid_argument);
}

TEST(CpExpectations, ExactIdentities) {
  for (int n = 4; n <= 20; ++n) {
    const CpExpectations e = cp_expectations(n);
    // X + Z = n - 1 exactly.
    EXPECT_EQ(e.x_sum + e.z_sum, e.denom);
    EXPECT_EQ(e.x_sum, (1ULL << (n - 2)) - 1);
    EXPECT_EQ(e.y_sum, static_cast<std::uint64_t>(n) * (1ULL << (n - 3)) - n + 1);
    EXPECT_GT(e.x(), 0.0);
    EXPECT_GT(e.y(), 0.0);
    EXPECT_GT(e.z(), 0.0);
  }
}

TEST(CpExpectations, PeripheryWeightedTermDominates) {
  // Y - X n_co > 0 whenever n >= 7 and n_co < n/2, in exact integers.
  for (int n = 7; n <= 20; ++n) {
    const CpExpectations e = cp_expectations(n);
    for (int n_co = 1; 2 * n_co < n; ++n_co) {
      EXPECT_GT(e.y_sum, e.x_sum * n_co) << n << ' ' << n_co;
    }
  }
}

TEST(CpExpectations, MatchBruteForceInterimExpectations) {
  for (int n = 4; n <= 7; ++n) {
    const oracle::Support support = oracle::core_periphery_uniform(n);
    const std::uint32_t full = ((1u << n) - 1u) & ~1u;  // player 0 linked to all
    oracle::Q x = 0, y = 0, z = 0, m = 0;
    for (const auto& [rows, mass] : support.graphs) {
      if (rows[0] != full) continue;
      int n_co = 0;
      for (int i = 0; i < n; ++i) n_co += std::popcount(rows[i]) == n - 1;
      const int n_p = n - n_co;
      m += mass;
      x += mass * n_p;
      z += mass * (n_co - 1);
      y += mass * (n_p * n_co);
    }
    const CpExpectations e = cp_expectations(n);
    using Q = oracle::Q;
    EXPECT_EQ(x / m, Q(e.scale * e.x_sum, e.denom)) << n;
    EXPECT_EQ(z / m, Q(e.scale * e.z_sum, e.denom)) << n;
    EXPECT_EQ(y / m, Q(e.scale * e.y_sum, e.denom)) << n;
  }
}

TEST(CpBne, FrozenValueAndStructure) {
  const CpActions a = cp_bne(5, 0.2, 2);
  EXPECT_NEAR(*a.core, 55.0 / 17.0, 1e-12);
  EXPECT_NEAR(*a.periphery, 1 + 0.2 * 2 * 55.0 / 17.0, 1e-12);
  const CpActions zero = cp_bne(6, 0.0, 3);
  EXPECT_EQ(*zero.core, 1.0);
  EXPECT_EQ(*zero.periphery, 1.0);
  EXPECT_NEAR(*cp_bne(7, 0.1, 2).periphery - *cp_bne(7, 0.1, 1).periphery,
              0.1 * *cp_bne(7, 0.1, 1).core, 1e-14);
  EXPECT_EQ(*cp_bne(7, 0.1, 1).core, *cp_bne(7, 0.1, 4).core);
  EXPECT_THROW(cp_bne(3, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(cp_bne(5, 0.25, 1), std::domain_error);
}

TEST(CpBne, MatchesFullSolve) {
  for (int n = 5; n <= 6; ++n) {
    for (double lambda : {0.05, 0.5 / (n - 1), 0.15}) {
      const ActionProfile solved = full_solve(Prior::core_periphery_uniform(n), lambda);
      for (std::size_t r = 0; r < solved.size(); ++r) {
        if (!solved.on_support[r]) continue;
        const int d = type_degree(solved.types[r]);
        const CpActions a = cp_bne(n, lambda, d == n - 1 ? n : d);
        const double expected = d == n - 1 ? *a.core : *a.periphery;
        EXPECT_NEAR(solved.values[r], expected, 1e-10) << n << ' ' << lambda << ' ' << d;
      }
    }
  }
}

TEST(UniformBne, ValuesAndMonotonicity) {
  EXPECT_NEAR(uniform_bne(3, 0.4, 2), 3.0, 1e-14);
  EXPECT_EQ(uniform_bne(6, 0.1, 0), 1.0);
  for (int d = 1; d < 6; ++d) EXPECT_GT(uniform_bne(6, 0.15, d), uniform_bne(6, 0.15, d - 1));
  EXPECT_THROW(uniform_bne(3, 0.5, 1), std::domain_error);
  EXPECT_THROW(uniform_bne(3, 0.2, 3), std::invalid_argument);
}

TEST(UniformBne, MatchesFullSolve) {
  for (int n = 3; n <= 5; ++n) {
    for (double lambda : {0.05, 0.5 / (n - 1)}) {
      const ActionProfile solved = full_solve(Prior::uniform(n), lambda);
      for (std::size_t r = 0; r < solved.size(); ++r) {
        EXPECT_NEAR(solved.values[r], uniform_bne(n, lambda, type_degree(solved.types[r])), 1e-10);
      }
    }
  }
}

TEST(ErBne, IdentitiesAndFlags) {
  for (int n = 3; n <= 8; ++n) {
    for (int d = 0; d < n; ++d) {
      EXPECT_NEAR(er_bne(n, 0.8 / (n - 1), 0.5, d).action, uniform_bne(n, 0.8 / (n - 1), d), 1e-14);
    }
  }
  EXPECT_EQ(er_bne(5, 0.0, 0.3, 2).action, 1.0);
  const ErAction isolated = er_bne(5, 0.2, 0.0, 2);
  EXPECT_NEAR(isolated.action, 1.5, 1e-14);
  EXPECT_TRUE(isolated.degenerate_prior);
  EXPECT_FALSE(er_bne(5, 0.2, 0.3, 2).degenerate_prior);
  EXPECT_THROW(er_bne(5, 0.3, 1.0, 1), std::domain_error);
}

TEST(ErBne, MatchesFullSolveWithIndependentLinks) {
  const int n = 5;
  const double p = 0.3;
  std::vector<double> pi(n * n, p);
  for (int i = 0; i < n; ++i) pi[i * n + i] = 0.0;
  const ActionProfile solved = full_solve(Prior::independent_links(n, pi), 0.2);
  for (std::size_t r = 0; r < solved.size(); ++r) {
    EXPECT_NEAR(solved.values[r], er_bne(n, 0.2, p, type_degree(solved.types[r])).action, 1e-10);
  }
}

TEST(SbGamma, SingleGroupIsErdosRenyi) {
  const BlockModel model{{6}, {0.4}, 0.4};
  const GammaMatrix g = sb_gamma(model, 0.1);
  EXPECT_NEAR(g(0, 0), 1.0 / (1.0 - 0.1 * (4 * 0.4 + 1)), 1e-14);
  for (int d = 0; d < 6; ++d) {
    EXPECT_NEAR(sb_action(model, 0.1, 0, {d}), er_bne(6, 0.1, 0.4, d).action, 1e-14);
  }
}

TEST(SbGamma, EqualProbabilitiesCollapse) {
  const BlockModel model{{3, 2, 2}, {0.3, 0.3, 0.3}, 0.3};
  const double lambda = 0.1;
  const GammaMatrix g = sb_gamma(model, lambda);
  for (double v : g.values) EXPECT_NEAR(v, 1.0 / (1.0 - lambda * (5 * 0.3 + 1)), 1e-13);
  EXPECT_NEAR(sb_action(model, g, lambda, 1, {2, 1, 1}), er_bne(7, lambda, 0.3, 4).action, 1e-13);
}

TEST(SbGamma, SymmetricRatioIdentity) {
  for (int size : {2, 3, 5}) {
    for (double p : {0.5, 0.8}) {
      const double eps = 0.2;
      const double lambda = 0.5 / (2 * size - 1);
      const GammaMatrix g = sb_gamma({{size, size}, {p, p}, eps}, lambda);
      EXPECT_NEAR(g(0, 0) / g(0, 1), (1 - lambda * (1 - eps)) / (1 - lambda * (1 - p)), 1e-14);
      EXPECT_NEAR(g(0, 0), g(1, 1), 1e-14);
    }
  }
}

TEST(SbGamma, IntraWeightDominatesWhenOwnGroupIsLarger) {
  // The crossing point lies strictly between n2 and n2 + 2, so n1 = n2 + 1
  // is left open.
  for (int n1 = 3; n1 <= 7; ++n1) {
    for (int n2 = 3; n2 <= 7; ++n2) {
      const double lambda = 0.5 / (n1 + n2 - 1);
      const GammaMatrix g = sb_gamma({{n1, n2}, {0.7, 0.7}, 0.2}, lambda);
      if (n1 >= n2 + 2) EXPECT_GT(g(0, 0), g(0, 1)) << n1 << ' ' << n2;
      if (n1 <= n2) EXPECT_LT(g(0, 0), g(0, 1)) << n1 << ' ' << n2;
      if (n1 >= n2) EXPECT_LT(g(1, 1), g(1, 0)) << n1 << ' ' << n2;
    }
  }
}

TEST(SbAction, ZeroDegreesCapsAndFullSolve) {
  const BlockModel model{{3, 2}, {0.8, 0.8}, 0.2};
  EXPECT_EQ(sb_action(model, 0.1, 0, {0, 0}), 1.0);
  EXPECT_THROW(sb_action(model, 0.1, 0, {3, 0}), std::invalid_argument);
  EXPECT_THROW(sb_action(model, 0.1, 1, {0, 2}), std::invalid_argument);
  EXPECT_NO_THROW(sb_action(model, 0.1, 1, {3, 1}));

  const ActionProfile solved = full_solve(Prior::stochastic_block(model), 0.1);
  for (std::size_t r = 0; r < solved.size(); ++r) {
    const TypeId t = solved.types[r];
    const std::uint32_t row = type_row(t.player, t.code, 5);
    std::vector<int> d{std::popcount(row & 0b00111u), std::popcount(row & 0b11000u)};
    EXPECT_NEAR(solved.values[r], sb_action(model, 0.1, model.group_of(t.player), d), 1e-10);
  }
}

TEST(EfficientActions, Examples) {
  for (double a : efficient_actions(Graph(4), 0.1)) EXPECT_EQ(a, 1.0);
  const std::vector<Edge> edge{{0, 1}};
  EXPECT_NEAR(efficient_actions(Graph::from_edges(2, edge), 0.2)[0], 1 / 0.6, 1e-14);
  const auto eff = efficient_actions(Graph::complete(4), 0.1);
  const auto nash = complete_info_nash(Graph::complete(4), 0.1);
  for (int i = 0; i < 4; ++i) EXPECT_GT(eff[i], nash[i]);
  EXPECT_THROW(efficient_actions(Graph::complete(4), 0.2), std::domain_error);
}

TEST(CoreOrdering, EightPlayerExamples) {
  const CoreOrderingVerdict small = core_ordering_check(8, 3, 0.1);
  EXPECT_EQ(small.ordering, CoreOrdering::kCompleteBelowIncomplete);
  const CoreOrderingVerdict large = core_ordering_check(8, 6, 0.1);
  EXPECT_EQ(large.ordering, CoreOrdering::kIncompleteBelowComplete);
  // At lambda = 0.1, 2 lambda rho(g) >= 1 for both graphs, so the efficient
  // profile does not exist there.
  EXPECT_FALSE(small.efficient.has_value());
  EXPECT_FALSE(large.efficient.has_value());

  const CoreOrderingVerdict admissible = core_ordering_check(8, 3, 0.05);
  EXPECT_EQ(admissible.ordering, CoreOrdering::kCompleteBelowIncomplete);
  EXPECT_TRUE(admissible.efficient_on_top);
  const CoreOrderingVerdict admissible_large = core_ordering_check(8, 6, 0.05);
  EXPECT_EQ(admissible_large.ordering, CoreOrdering::kIncompleteBelowComplete);
  EXPECT_TRUE(admissible_large.efficient_on_top);
}

TEST(CoreOrdering, GridHasNoViolations) {
  for (int n = 7; n <= 10; ++n) {
    for (double scale : {0.1, 0.25, 0.4, 0.5}) {
      const double lambda = scale / (n - 1);
      for (int n_co = 1; n_co <= n - 1; ++n_co) {
        const CoreOrderingVerdict v = core_ordering_check(n, n_co, lambda);
        const bool small_core = 2 * n_co <= n;
        EXPECT_EQ(v.ordering == CoreOrdering::kCompleteBelowIncomplete, small_core)
            << n << ' ' << n_co << ' ' << lambda;
        if (small_core) EXPECT_TRUE(v.efficient_on_top);
      }
    }
  }
}
