#include "netgame/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "netgame/solver.hpp"

namespace netgame {

namespace {

std::string strip(std::string_view s) {
  const auto hash = s.find('#');
  if (hash != std::string_view::npos) s = s.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::string at_line(int line) { return "line " + std::to_string(line) + ": "; }

template <class T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("bad " + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(strip(item));
  return out;
}

const std::string& require(const KeyValues& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end() || it->second.empty()) {
    throw ParseError("missing config key '" + key + "'");
  }
  return it->second;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::string raw;
  int line = 0;
  int n = -1;
  Graph g;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = strip(raw);
    if (text.empty()) continue;
    std::istringstream fields(text);
    if (n < 0) {
      std::string tag;
      if (!(fields >> tag >> n) || tag != "n") {
        throw ParseError(at_line(line) + "expected 'n <N>'");
      }
      std::string extra;
      if (fields >> extra) throw ParseError(at_line(line) + "trailing text");
      try {
        g = Graph(n);
      } catch (const std::exception& e) {
        throw ParseError(at_line(line) + e.what());
      }
      continue;
    }
    int i = 0;
    int j = 0;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra)) {
      throw ParseError(at_line(line) + "expected '<i> <j>'");
    }
    try {
      g.add_edge(i, j);
    } catch (const std::exception& e) {
      throw ParseError(at_line(line) + e.what());
    }
  }
  if (n < 0) throw ParseError("graph file has no 'n <N>' line");
  return g;
}

Graph read_graph_file(const std::filesystem::path& path) {
  auto in = open(path);
  try {
    return read_graph(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "n " << g.size() << '\n';
  for (int i = 0; i < g.size(); ++i) {
    for (int j = i + 1; j < g.size(); ++j) {
      if (g.has_edge(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

KeyValues read_key_values(std::istream& in) {
  KeyValues out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = strip(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError(at_line(line) + "expected key=value");
    }
    std::string key = strip(text.substr(0, eq));
    if (key.empty()) throw ParseError(at_line(line) + "empty key");
    out[key] = strip(text.substr(eq + 1));
  }
  return out;
}

KeyValues read_key_values_file(const std::filesystem::path& path) {
  auto in = open(path);
  try {
    return read_key_values(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::pair<std::uint64_t, double>> read_mass_table(
    std::istream& in) {
  std::vector<std::pair<std::uint64_t, double>> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = strip(raw);
    if (text.empty()) continue;
    std::istringstream fields(text);
    std::string code;
    std::string mass;
    std::string extra;
    if (!(fields >> code >> mass) || (fields >> extra)) {
      throw ParseError(at_line(line) + "expected '<graph-code> <mass>'");
    }
    try {
      out.emplace_back(parse_number<std::uint64_t>(code, "graph code"),
                       parse_number<double>(mass, "mass"));
    } catch (const ParseError& e) {
      throw ParseError(at_line(line) + e.what());
    }
  }
  return out;
}

std::vector<double> read_link_probabilities(std::istream& in, int n) {
  if (n < 2 || n > kMaxVertices) throw ParseError("bad n for link matrix");
  std::vector<double> pi(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<char> seen(pi.size(), 0);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = strip(raw);
    if (text.empty()) continue;
    std::istringstream fields(text);
    std::string si, sj, sp, extra;
    if (!(fields >> si >> sj >> sp) || (fields >> extra)) {
      throw ParseError(at_line(line) + "expected '<i> <j> <prob>'");
    }
    int i = 0;
    int j = 0;
    double p = 0.0;
    try {
      i = parse_number<int>(si, "vertex");
      j = parse_number<int>(sj, "vertex");
      p = parse_number<double>(sp, "probability");
    } catch (const ParseError& e) {
      throw ParseError(at_line(line) + e.what());
    }
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw ParseError(at_line(line) + "bad vertex pair");
    }
    const std::size_t a = static_cast<std::size_t>(i) * n + j;
    const std::size_t b = static_cast<std::size_t>(j) * n + i;
    if (seen[a] && pi[a] != p) {
      throw ParseError(at_line(line) + "conflicting probability for pair");
    }
    pi[a] = pi[b] = p;
    seen[a] = seen[b] = 1;
  }
  return pi;
}

Prior prior_from_config(const KeyValues& config,
                        const std::filesystem::path& base_dir) {
  const std::string& kind = require(config, "prior.kind");
  int n = 0;
  if (kind != "stochastic_block" || config.count("n")) {
    n = parse_number<int>(require(config, "n"), "n");
  }
  if (kind == "uniform") return Prior::uniform(n);
  if (kind == "cp_uniform") return Prior::core_periphery_uniform(n);
  if (kind == "point_mass") {
    const Graph g =
        read_graph_file(resolve(base_dir, require(config, "point_mass.graph")));
    if (g.size() != n) {
      throw ParseError("point_mass.graph has " + std::to_string(g.size()) +
                       " vertices but n = " + std::to_string(n));
    }
    return Prior::point_mass(g);
  }
  if (kind == "table") {
    const auto path = resolve(base_dir, require(config, "table.path"));
    auto in = open(path);
    try {
      return Prior::table(n, read_mass_table(in));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
  if (kind == "independent") {
    if (config.count("independent.p")) {
      const double p = parse_number<double>(config.at("independent.p"),
                                            "independent.p");
      std::vector<double> pi(static_cast<std::size_t>(n) * n, p);
      for (int i = 0; i < n; ++i) pi[static_cast<std::size_t>(i) * n + i] = 0.0;
      return Prior::independent_links(n, std::move(pi));
    }
    const auto path = resolve(base_dir, require(config, "independent.pi"));
    auto in = open(path);
    try {
      return Prior::independent_links(n, read_link_probabilities(in, n));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  }
  if (kind == "stochastic_block") {
    BlockModel model;
    for (const auto& s : split_commas(require(config, "stochastic_block.sizes"))) {
      model.sizes.push_back(parse_number<int>(s, "block size"));
    }
    for (const auto& s : split_commas(require(config, "stochastic_block.p"))) {
      model.within.push_back(parse_number<double>(s, "block probability"));
    }
    model.across =
        parse_number<double>(require(config, "stochastic_block.eps"), "eps");
    if (n != 0 && n != model.players()) {
      throw ParseError("stochastic_block.sizes sum to " +
                       std::to_string(model.players()) + " but n = " +
                       std::to_string(n));
    }
    return Prior::stochastic_block(std::move(model));
  }
  throw ParseError("unknown prior.kind '" + kind + "'");
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_equilibrium_csv(std::ostream& out, const ActionProfile& profile) {
  out << "player,type_code,type_bits,degree,on_support,action\n";
  for (std::size_t r = 0; r < profile.size(); ++r) {
    const TypeId t = profile.types[r];
    out << t.player << ',' << t.code << ',' << type_bits(t, profile.players)
        << ',' << type_degree(t) << ',' << (profile.on_support[r] ? 1 : 0)
        << ',' << format_number(profile.values[r]) << '\n';
  }
}

}  // namespace netgame
