#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "netgame/netgame.hpp"

namespace netgame::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string config_path;
  std::string out_path;
  double tol = 1e-12;
  std::optional<int> max_order;
  int threads = 1;
  std::vector<std::string> overrides;
  std::optional<double> lambda;
  std::optional<int> n;
};

struct SolveArgs {
  std::string method = "fixed";
  std::string space = "full";
  bool matrix_free = false;
  bool support_only = false;
};

struct ClosedFormArgs {
  std::string family;
};

struct SweepArgs {
  std::optional<int> first;
  std::optional<int> last;
  bool full_range = false;
};

struct TypeArgs {
  std::optional<int> player;
  std::optional<std::uint32_t> code;
  std::string bits;
  std::optional<int> target;
};

struct CompareArgs {
  std::string graph_path;
  std::string method = "fixed";
};

struct EnumerateArgs {
  std::string family = "all";
};

// Config file plus command-line overrides, resolved before any work starts.
class Context {
 public:
  explicit Context(const Settings& s) : settings_(s) {
    if (!s.config_path.empty()) {
      const fs::path path(s.config_path);
      if (!fs::is_regular_file(path)) {
        throw UsageError("config file not found: " + s.config_path);
      }
      config_ = read_key_values_file(path);
      base_ = path.parent_path();
    }
    for (const auto& kv : s.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UsageError("--set expects key=value, got '" + kv + "'");
      }
      config_[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (s.lambda) config_["lambda"] = format_number(*s.lambda);
    if (s.n) config_["n"] = std::to_string(*s.n);
    if (!s.out_path.empty()) {
      const fs::path parent = fs::path(s.out_path).parent_path();
      if (!parent.empty() && !fs::is_directory(parent)) {
        throw UsageError("output directory does not exist: " + parent.string());
      }
    }
    if (!(s.tol > 0.0)) throw UsageError("--tol must be positive");
    if (s.threads < 1) throw UsageError("--threads must be >= 1");
  }

  const Settings& settings() const { return settings_; }
  const KeyValues& config() const { return config_; }
  const fs::path& base() const { return base_; }

  bool has(const std::string& key) const { return config_.count(key) > 0; }

  std::string text(const std::string& key) const {
    const auto it = config_.find(key);
    if (it == config_.end()) throw UsageError("missing config key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const {
    const std::string v = text(key);
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "' is not a number: " + v);
    }
  }

  int integer(const std::string& key) const {
    const std::string v = text(key);
    try {
      std::size_t used = 0;
      const int x = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw UsageError("config key '" + key + "' is not an integer: " + v);
    }
  }

  Prior prior() const { return prior_from_config(config_, base_); }

 private:
  Settings settings_;
  KeyValues config_;
  fs::path base_;
};

std::string join(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += sep;
    out += std::to_string(values[k]);
  }
  return out;
}

std::string join(const std::vector<double>& values, char sep) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += sep;
    out += format_number(values[k]);
  }
  return out;
}

std::vector<int> group_degrees(const BlockModel& model, TypeId t, int n) {
  std::vector<int> d(model.groups(), 0);
  const std::uint32_t row = type_row(t.player, t.code, n);
  for (int j = 0; j < n; ++j) {
    if ((row >> j) & 1u) ++d[model.group_of(j)];
  }
  return d;
}

std::optional<double> constant_link_probability(const Prior& prior) {
  const int n = prior.size();
  const double p = prior.link_probability(0, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (prior.link_probability(i, j) != p) return std::nullopt;
    }
  }
  return p;
}

// Closed-form equilibrium action for each type of a prior with a known
// characterization.
class ClosedFormOracle {
 public:
  ClosedFormOracle(const Prior& prior, double lambda)
      : prior_(prior), lambda_(lambda) {
    switch (prior.kind()) {
      case PriorKind::kUniform:
        family_ = "uniform";
        break;
      case PriorKind::kCorePeripheryUniform:
        family_ = "cp";
        break;
      case PriorKind::kStochasticBlock:
        family_ = "sb";
        gamma_ = sb_gamma(prior.block_model(), lambda);
        break;
      case PriorKind::kIndependentLinks:
        p_ = constant_link_probability(prior);
        if (!p_) {
          throw UsageError(
              "no closed form for independent links with unequal probabilities");
        }
        family_ = "er";
        break;
      case PriorKind::kPointMass:
        family_ = "complete_info";
        prior.for_each_support([&](const Graph& g, double) { graph_ = g; });
        kb_ = complete_info_nash(graph_, lambda);
        break;
      case PriorKind::kTable:
        throw UsageError("no closed form for a table prior");
    }
  }

  const std::string& family() const { return family_; }

  double action(TypeId t) const {
    const int n = prior_.size();
    const int d = type_degree(t);
    if (family_ == "uniform") return uniform_bne(n, lambda_, d);
    if (family_ == "er") return er_bne(n, lambda_, *p_, d).action;
    if (family_ == "sb") {
      return sb_action(prior_.block_model(), gamma_, lambda_,
                       prior_.block_model().group_of(t.player),
                       group_degrees(prior_.block_model(), t, n));
    }
    if (family_ == "cp") {
      const CpActions a = cp_bne(n, lambda_, d == n - 1 ? n : d);
      return d == n - 1 ? *a.core : *a.periphery;
    }
    return kb_[t.player];
  }

 private:
  Prior prior_;
  double lambda_;
  std::string family_;
  std::optional<double> p_;
  GammaMatrix gamma_;
  Graph graph_;
  std::vector<double> kb_;
};

ActionProfile solve_with(const BlockSystem& system, const std::string& method,
                         const Settings& s) {
  if (method == "fixed") {
    return solve_fixed_point(system, {s.tol, s.threads}).profile;
  }
  if (method == "direct") return solve_direct(system);
  if (method == "series") {
    const auto series = action_series(system, s.max_order.value_or(40), s.threads);
    ActionProfile out;
    out.players = system.players();
    out.types = system.types();
    for (std::size_t r = 0; r < series.size(); ++r) {
      out.values.push_back(series[r].value);
      out.on_support.push_back(system.on_support(r));
    }
    return out;
  }
  throw UsageError("unknown --method '" + method + "' (fixed, direct, series)");
}

TypeId resolve_type(const TypeArgs& a, int n) {
  if (!a.player) throw UsageError("--player is required");
  if (*a.player < 0 || *a.player >= n) throw UsageError("--player out of range");
  if (!a.bits.empty()) {
    if (static_cast<int>(a.bits.size()) != n) {
      throw UsageError("--bits needs exactly n characters");
    }
    std::uint32_t row = 0;
    for (int j = 0; j < n; ++j) {
      if (a.bits[j] == '1') {
        row |= 1u << j;
      } else if (a.bits[j] != '0') {
        throw UsageError("--bits accepts only 0 and 1");
      }
    }
    return {*a.player, row_to_type(*a.player, row, n)};
  }
  if (!a.code) throw UsageError("--code or --bits is required");
  if (*a.code >= type_count(n)) throw UsageError("--code out of range");
  return {*a.player, *a.code};
}

void cmd_solve(const Context& ctx, const SolveArgs& a, std::ostream& out) {
  const Prior prior = ctx.prior();
  const double lambda = ctx.real("lambda");
  check_lambda(lambda, prior.size());
  BlockOptions options;
  if (a.space == "reduced") {
    options.space = TypeSpace::kReduced;
  } else if (a.space != "full") {
    throw UsageError("unknown --space '" + a.space + "' (full, reduced)");
  }
  if (a.matrix_free) options.mode = BlockMode::kMatrixFree;
  const BlockSystem system = BlockSystem::build(prior, lambda, options);
  ActionProfile profile = solve_with(system, a.method, ctx.settings());
  if (a.support_only) {
    ActionProfile kept;
    kept.players = profile.players;
    for (std::size_t r = 0; r < profile.size(); ++r) {
      if (!profile.on_support[r]) continue;
      kept.types.push_back(profile.types[r]);
      kept.values.push_back(profile.values[r]);
      kept.on_support.push_back(1);
    }
    profile = std::move(kept);
  }
  write_equilibrium_csv(out, profile);
}

std::string infer_family(const Context& ctx) {
  if (!ctx.has("prior.kind")) {
    throw UsageError("closed-form needs --family or prior.kind");
  }
  const std::string kind = ctx.text("prior.kind");
  if (kind == "uniform") return "uniform";
  if (kind == "cp_uniform") return "cp";
  if (kind == "stochastic_block") return "sb";
  if (kind == "independent") return "er";
  throw UsageError("no closed form for prior.kind '" + kind + "'");
}

void cmd_closed_form(const Context& ctx, const ClosedFormArgs& a,
                     std::ostream& out) {
  const std::string family = a.family.empty() ? infer_family(ctx) : a.family;
  const double lambda = ctx.real("lambda");
  out << "family,n,lambda,params,group_or_role,degree_or_d_vector,action\n";
  auto row = [&](int n, const std::string& params, const std::string& role,
                 const std::string& degree, double action) {
    out << family << ',' << n << ',' << format_number(lambda) << ',' << params
        << ',' << role << ',' << degree << ',' << format_number(action) << '\n';
  };

  if (family == "sb") {
    const Prior prior = ctx.prior();
    const BlockModel& model = prior.block_model();
    const GammaMatrix gamma = sb_gamma(model, lambda);
    const std::string params = "sizes=" + join(model.sizes, '|') + ";p=" +
                               join(model.within, '|') +
                               ";eps=" + format_number(model.across);
    for (int k = 0; k < model.groups(); ++k) {
      std::vector<int> d(model.groups(), 0);
      // Odometer over every admissible degree vector of a group-k agent.
      while (true) {
        row(model.players(), params, "group=" + std::to_string(k), join(d, '|'),
            sb_action(model, gamma, lambda, k, d));
        int l = 0;
        for (; l < model.groups(); ++l) {
          const int cap = l == k ? model.sizes[l] - 1 : model.sizes[l];
          if (d[l] < cap) {
            ++d[l];
            break;
          }
          d[l] = 0;
        }
        if (l == model.groups()) break;
      }
    }
    return;
  }

  const int n = ctx.integer("n");
  if (family == "uniform") {
    for (int d = 0; d < n; ++d) {
      row(n, "", "any", std::to_string(d), uniform_bne(n, lambda, d));
    }
  } else if (family == "er") {
    const double p = ctx.real("independent.p");
    check_lambda(lambda, n);
    for (int d = 0; d < n; ++d) {
      const ErAction e = er_bne(n, lambda, p, d);
      std::string params = "p=" + format_number(p);
      if (e.degenerate_prior) params += ";degenerate_prior";
      row(n, params, "any", std::to_string(d), e.action);
    }
  } else if (family == "cp" || family == "cp_complete" || family == "cp_efficient") {
    for (int k = 1; k <= n - 2; ++k) {
      CpActions actions;
      if (family == "cp") {
        actions = cp_bne(n, lambda, k);
      } else if (family == "cp_complete") {
        actions = cp_complete_info(k, n - k, lambda);
      } else {
        actions = cp_efficient(k, n - k, lambda);
      }
      const std::string params = "n_co=" + std::to_string(k);
      row(n, params, "core", std::to_string(n - 1), *actions.core);
      row(n, params, "periphery", std::to_string(k), *actions.periphery);
    }
  } else {
    throw UsageError("unknown --family '" + family +
                     "' (uniform, er, cp, cp_complete, cp_efficient, sb)");
  }
}

void cmd_sweep(const Context& ctx, const SweepArgs& a, std::ostream& out) {
  const int n = ctx.integer("n");
  const double lambda = ctx.real("lambda");
  int first = 1;
  int last = n / 2;
  if (a.full_range) {
    first = 0;
    last = n - 1;
  }
  if (ctx.has("sweep.first")) first = ctx.integer("sweep.first");
  if (ctx.has("sweep.last")) last = ctx.integer("sweep.last");
  if (a.first) first = *a.first;
  if (a.last) last = *a.last;
  const auto rows = welfare_sweep(n, lambda, first, last);
  out << "n,lambda,n_co,w_incomplete,w_complete,w_efficient\n";
  for (const auto& r : rows) {
    out << n << ',' << format_number(lambda) << ',' << r.n_co << ','
        << format_number(r.welfare.incomplete) << ','
        << format_number(r.welfare.complete) << ','
        << format_number(r.welfare.efficient) << '\n';
  }
}

void cmd_posterior(const Context& ctx, const TypeArgs& a, std::ostream& out) {
  const Prior prior = ctx.prior();
  const int n = prior.size();
  const TypeId observer = resolve_type(a, n);
  if (a.target && (*a.target < 0 || *a.target >= n || *a.target == observer.player)) {
    throw UsageError("--target must be another player");
  }
  out << "observer_player,observer_code,observer_bits,target_player,"
         "target_code,target_bits,probability\n";
  for (const auto& e : prior.posterior_row(observer)) {
    if (a.target && e.target.player != *a.target) continue;
    out << observer.player << ',' << observer.code << ','
        << type_bits(observer, n) << ',' << e.target.player << ','
        << e.target.code << ',' << type_bits(e.target, n) << ','
        << format_number(e.probability) << '\n';
  }
}

void cmd_walks(const Context& ctx, const TypeArgs& a, std::ostream& out) {
  const Prior prior = ctx.prior();
  const int n = prior.size();
  const int order = ctx.settings().max_order.value_or(3);
  if (order < 0) throw UsageError("--max-order must be >= 0");
  BlockOptions options;
  if (!prior.factored() && n > kMaxDenseBlockVertices) {
    options.space = TypeSpace::kReduced;
  }
  const BlockSystem system = BlockSystem::build(prior, 0.0, options);
  std::optional<std::size_t> only;
  if (a.player) {
    const TypeId t = resolve_type(a, n);
    only = system.row_of(t);
    if (*only == system.dimension() || !system.on_support(*only)) {
      throw UsageError("type has zero probability under the prior");
    }
  }
  out << "player,type_code,type_bits,on_support,s,beta\n";
  std::vector<double> beta(system.dimension(), 1.0);
  std::vector<double> next(system.dimension());
  std::vector<std::vector<double>> table;
  for (int s = 0; s <= order; ++s) {
    if (s > 0) {
      system.apply(beta, next, ctx.settings().threads);
      beta.swap(next);
    }
    table.push_back(beta);
  }
  for (std::size_t r = 0; r < system.dimension(); ++r) {
    if (only && r != *only) continue;
    const TypeId t = system.types()[r];
    for (int s = 0; s <= order; ++s) {
      out << t.player << ',' << t.code << ',' << type_bits(t, n) << ','
          << (system.on_support(r) ? 1 : 0) << ',' << s << ','
          << format_number(table[s][r]) << '\n';
    }
  }
}

void cmd_compare(const Context& ctx, const CompareArgs& a, std::ostream& out) {
  const Prior prior = ctx.prior();
  const int n = prior.size();
  const double lambda = ctx.real("lambda");
  check_lambda(lambda, n);
  BlockOptions options;
  if (!prior.factored() && n > kMaxDenseBlockVertices) {
    options.space = TypeSpace::kReduced;
  }
  const BlockSystem system = BlockSystem::build(prior, lambda, options);
  const ActionProfile solved = solve_with(system, a.method, ctx.settings());
  const ClosedFormOracle oracle(prior, lambda);

  out << "player,type_code,type_bits,degree,solver,closed_form,abs_diff\n";
  double worst = 0.0;
  for (std::size_t r = 0; r < solved.size(); ++r) {
    if (!solved.on_support[r]) continue;
    const TypeId t = solved.types[r];
    const double cf = oracle.action(t);
    const double diff = std::abs(cf - solved.values[r]);
    worst = std::max(worst, diff);
    out << t.player << ',' << t.code << ',' << type_bits(t, n) << ','
        << type_degree(t) << ',' << format_number(solved.values[r]) << ','
        << format_number(cf) << ',' << format_number(diff) << '\n';
  }
  out << "# max_abs_diff solver_vs_" << oracle.family() << ' '
      << format_number(worst) << '\n';

  std::string graph_path = a.graph_path;
  if (graph_path.empty() && ctx.has("compare.graph")) {
    graph_path = (ctx.base() / ctx.text("compare.graph")).string();
  }
  if (graph_path.empty()) return;
  const Graph g = read_graph_file(graph_path);
  if (g.size() != n) throw UsageError("comparison graph has the wrong size");
  const std::vector<double> complete = complete_info_nash(g, lambda);
  out << "player,type_bits,complete_info,incomplete_info,abs_diff\n";
  double gap = 0.0;
  for (int i = 0; i < n; ++i) {
    const TypeId t{i, row_to_type(i, g.row(i), n)};
    const std::size_t r = system.row_of(t);
    if (r == system.dimension() || !system.on_support(r)) {
      throw UsageError("comparison graph is outside the prior's support");
    }
    const double diff = std::abs(complete[i] - solved.values[r]);
    gap = std::max(gap, diff);
    out << i << ',' << type_bits(t, n) << ',' << format_number(complete[i])
        << ',' << format_number(solved.values[r]) << ','
        << format_number(diff) << '\n';
  }
  out << "# max_abs_diff complete_vs_incomplete " << format_number(gap) << '\n';
}

void cmd_enumerate(const Context& ctx, const EnumerateArgs& a,
                   std::ostream& out) {
  const int n = ctx.integer("n");
  GraphClass cls;
  if (a.family == "all") {
    cls = AllGraphs{n};
  } else if (a.family == "cp") {
    cls = CorePeripheryGraphs{n};
  } else {
    throw UsageError("unknown --class '" + a.family + "' (all, cp)");
  }
  out << "index,code,edges,degrees\n";
  std::uint64_t index = 0;
  for_each_graph(cls, [&](const Graph& g) {
    std::vector<int> degrees(n);
    for (int i = 0; i < n; ++i) degrees[i] = g.degree(i);
    out << index++ << ',' << g.code() << ',' << g.edge_count() << ','
        << join(degrees, '|') << '\n';
    return true;
  });
}

std::string one_line(std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  return message;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Bayesian-Nash equilibria of linear-quadratic network games"};
  app.name("netgame");
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--config", s.config_path, "key=value configuration file");
  app.add_option("--out", s.out_path, "write CSV here instead of stdout");
  app.add_option("--tol", s.tol, "sup-norm tolerance for the fixed point");
  app.add_option("--max-order", s.max_order, "series truncation order");
  app.add_option("--threads", s.threads, "worker threads for block products");
  app.add_option("--set", s.overrides, "override a config key (key=value)");
  app.add_option("--lambda", s.lambda, "complementarity strength");
  app.add_option("-n,--players", s.n, "number of players");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "equilibrium on the full type space");
  solve_cmd->add_option("--method", solve.method, "fixed, direct or series");
  solve_cmd->add_option("--space", solve.space, "full or reduced");
  solve_cmd->add_flag("--matrix-free", solve.matrix_free,
                      "recompute rows on every product (factored priors)");
  solve_cmd->add_flag("--support-only", solve.support_only,
                      "omit zero-probability types");

  ClosedFormArgs closed;
  auto* closed_cmd = app.add_subcommand("closed-form", "closed-form equilibria");
  closed_cmd->add_option("--family", closed.family,
                         "uniform, er, cp, cp_complete, cp_efficient or sb");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep-welfare", "welfare over core sizes");
  sweep_cmd->add_option("--from", sweep.first, "first core size");
  sweep_cmd->add_option("--to", sweep.last, "last core size");
  sweep_cmd->add_flag("--full-range", sweep.full_range, "core sizes 0..n-1");

  TypeArgs posterior;
  auto* posterior_cmd = app.add_subcommand("posterior", "posterior beliefs of one type");
  TypeArgs walks;
  auto* walks_cmd = app.add_subcommand("walks", "expected walk measures");
  for (auto [cmd, t] : {std::pair{posterior_cmd, &posterior}, std::pair{walks_cmd, &walks}}) {
    cmd->add_option("--player", t->player, "observer player (0-based)");
    cmd->add_option("--code", t->code, "observer type code");
    cmd->add_option("--bits", t->bits, "observer row as n characters");
  }
  posterior_cmd->add_option("--target", posterior.target, "only this target player");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "solver against closed forms");
  compare_cmd->add_option("--graph", compare.graph_path,
                          "also compare complete and incomplete information on this graph");
  compare_cmd->add_option("--method", compare.method, "fixed, direct or series");

  EnumerateArgs enumerate;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "list graphs of a class");
  enumerate_cmd->add_option("--class", enumerate.family, "all or cp");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    const Context ctx(s);
    std::ostringstream buffer;
    if (solve_cmd->parsed()) {
      cmd_solve(ctx, solve, buffer);
    } else if (closed_cmd->parsed()) {
      cmd_closed_form(ctx, closed, buffer);
    } else if (sweep_cmd->parsed()) {
      cmd_sweep(ctx, sweep, buffer);
    } else if (posterior_cmd->parsed()) {
      cmd_posterior(ctx, posterior, buffer);
    } else if (walks_cmd->parsed()) {
      cmd_walks(ctx, walks, buffer);
    } else if (compare_cmd->parsed()) {
      cmd_compare(ctx, compare, buffer);
    } else if (enumerate_cmd->parsed()) {
      cmd_enumerate(ctx, enumerate, buffer);
    }
    if (s.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(s.out_path, std::ios::binary);
      file << buffer.str();
      if (!file) throw UsageError("cannot write " + s.out_path);
    }
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace netgame::cli
