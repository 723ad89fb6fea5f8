#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netgame/graph.hpp"
#include "netgame/prior.hpp"

namespace netgame {

struct ActionProfile;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `n <N>` on the first content line, then one `<i> <j>` edge per line.
/// Text after `#` is ignored.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);

/// `key=value` lines; blank lines and `#` comments are skipped. Later keys
/// override earlier ones.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_key_values(std::istream& in);
KeyValues read_key_values_file(const std::filesystem::path& path);

/// Lines `<graph-code> <mass>`.
std::vector<std::pair<std::uint64_t, double>> read_mass_table(std::istream& in);
/// Lines `<i> <j> <prob>`; unlisted pairs get probability 0. Returns the
/// symmetric n*n matrix.
std::vector<double> read_link_probabilities(std::istream& in, int n);

/// Builds the prior described by `n`, `prior.kind` and the kind-specific
/// keys. Relative paths resolve against `base_dir`.
Prior prior_from_config(const KeyValues& config,
                        const std::filesystem::path& base_dir = {});

/// `%.12g`.
std::string format_number(double value);

/// Header `player,type_code,type_bits,degree,on_support,action`.
void write_equilibrium_csv(std::ostream& out, const ActionProfile& profile);

}  // namespace netgame
