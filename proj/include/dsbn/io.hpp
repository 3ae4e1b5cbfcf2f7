#pragma once

#include <string>
#include <string_view>

#include "dsbn/ci.hpp"
#include "dsbn/hyper.hpp"
#include "dsbn/network.hpp"
#include "dsbn/population.hpp"

namespace dsbn {

// Line-oriented text formats. `#` starts a comment; blank lines are ignored.
// Parse errors carry the 1-based line number.
//
// Focal sets are written as `<var>=<v1|v2> ...` with omitted variables
// spanning their whole domain. A set that is not a product is written as a
// union of products separated by `+`.

// var <name> <v1> <v2> ... / node <name> parents <p1> ... / hidden <name> /
// focal <node> <mass> <focal set>. Nodes without focal lines are vacuous.
std::string write_network(const BeliefNetwork& net);
BeliefNetwork read_network(std::string_view text);

// vars <name> ... / domain <name> <v1> ... / one row per active object with a
// `|`-joined value subset per variable, `*` for the full domain. Variables
// without a domain line take the values of the rows in order of appearance.
std::string write_sample(const Population& pop);
Population read_sample(std::string_view text);

// var <name> <v1> ... / focal <mass> <focal set>.
std::string write_mass(const MassFunction& m);
MassFunction read_mass(std::string_view text);

// node <name> / edge <a> <marks> <b> with marks like o->, <->, -->, o-o /
// noncollider <a> <b> <c> / sepset <a> <b> : <s1> ...
std::string write_pipg(const Pipg& g);
Pipg read_pipg(std::string_view text);

// One hyperedge per line, vertices space-separated.
std::string write_hypergraph(const Hypergraph& h);
Hypergraph read_hypergraph(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace dsbn
