#include "dsbn/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dsbn/error.hpp"

namespace dsbn {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string w; words >> w;) line.tokens.push_back(w);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const Line& line, const std::string& what) {
  throw Error(Errc::Parse, "line " + std::to_string(line.number) + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string::npos) return out;
    start = at + 1;
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

const std::string& checked(const std::string& token) {
  bool bad = token.empty() || token == "+" || token == "*" || token == ":" ||
             token.find_first_of(" \t\r\n#|=") != std::string::npos;
  if (bad) throw Error(Errc::InvalidArgument, "name '" + token + "' cannot be written in the text formats");
  return token;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const Line& line, const std::string& s) {
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used != s.size()) fail(line, "bad number '" + s + "'");
    return x;
  } catch (const std::logic_error&) {
    fail(line, "bad number '" + s + "'");
  }
}

std::string format_set(const Frame& frame, const ConfigSet& set) {
  auto term = [&](const ProductFactors& factors) {
    std::vector<std::string> parts;
    for (std::size_t v = 0; v < frame.size(); ++v) {
      const auto& var = frame.variable(v);
      if (factors[v].size() == var.domain.size()) continue;
      std::vector<std::string> values;
      for (auto x : factors[v]) values.push_back(var.domain[x]);
      parts.push_back(var.name + "=" + join(values, "|"));
    }
    return join(parts, " ");
  };
  if (auto factors = factorize_product(frame, set)) return term(*factors);
  std::vector<std::string> terms;
  for (auto c : set) {
    ProductFactors factors;
    for (auto x : frame.decode(c)) factors.push_back({x});
    terms.push_back(term(factors));
  }
  return join(terms, " + ");
}

// Tokens from `first` on describe one focal set over `frame`.
ConfigSet parse_set(const Line& line, const Frame& frame, std::size_t first) {
  ConfigSet out;
  std::vector<std::vector<std::string>> labels;
  auto reset = [&] {
    labels.clear();
    for (const auto& v : frame.variables()) labels.push_back(v.domain);
  };
  std::vector<bool> seen(frame.size(), false);
  auto flush = [&] {
    out = unite(out, product_set(frame, labels));
    std::fill(seen.begin(), seen.end(), false);
    reset();
  };
  reset();
  for (std::size_t i = first; i < line.tokens.size(); ++i) {
    const auto& tok = line.tokens[i];
    if (tok == "+") {
      flush();
      continue;
    }
    auto eq = tok.find('=');
    if (eq == std::string::npos) fail(line, "expected <var>=<values>, got '" + tok + "'");
    auto name = tok.substr(0, eq);
    auto idx = frame.index_of(name);
    if (!idx) fail(line, "unknown variable '" + name + "' in focal set");
    if (seen[*idx]) fail(line, "variable '" + name + "' listed twice in one term");
    seen[*idx] = true;
    auto values = split(tok.substr(eq + 1), '|');
    const auto& domain = frame.variable(*idx).domain;
    for (const auto& v : values)
      if (std::find(domain.begin(), domain.end(), v) == domain.end())
        fail(line, "value '" + v + "' not in the domain of '" + name + "'");
    labels[*idx] = values;
  }
  flush();
  return out;
}

Variable parse_variable(const Line& line) {
  if (line.tokens.size() < 3) fail(line, "var needs a name and at least one value");
  Variable v{line.tokens[1], {line.tokens.begin() + 2, line.tokens.end()}};
  auto sorted = v.domain;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail(line, "repeated value in '" + v.name + "'");
  return v;
}

std::string variable_line(const Variable& v) {
  std::string s = "var " + checked(v.name);
  for (const auto& x : v.domain) s += " " + checked(x);
  return s + "\n";
}

char mark_char(Mark m, bool left) {
  switch (m) {
    case Mark::Tail: return '-';
    case Mark::Circle: return 'o';
    case Mark::Arrow: return left ? '<' : '>';
  }
  return '?';
}

std::optional<Mark> parse_mark(char c, bool left) {
  if (c == '-') return Mark::Tail;
  if (c == 'o') return Mark::Circle;
  if (c == (left ? '<' : '>')) return Mark::Arrow;
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string write_network(const BeliefNetwork& net) {
  const auto& dag = net.dag();
  std::string out;
  for (const auto& v : net.variables()) out += variable_line(v);
  for (std::size_t i = 0; i < dag.size(); ++i) {
    out += "node " + dag.name(i) + " parents";
    for (auto p : dag.parents(i)) out += " " + dag.name(p);
    out += "\n";
  }
  for (std::size_t i = 0; i < dag.size(); ++i)
    if (dag.hidden(i)) out += "hidden " + dag.name(i) + "\n";
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (net.placeholder(i)) continue;
    const auto& m = net.valuation(i);
    for (const auto& [set, mass] : m.focals()) {
      auto text = format_set(m.frame(), set);
      out += "focal " + dag.name(i) + " " + format_number(mass) + (text.empty() ? "" : " " + text) + "\n";
    }
  }
  return out;
}

BeliefNetwork read_network(std::string_view text) {
  std::vector<Variable> vars;
  std::map<std::string, std::size_t> var_index;
  std::vector<std::pair<Line, std::vector<std::string>>> nodes;
  std::vector<Line> hidden, focals;
  for (const auto& line : split_lines(text)) {
    const auto& kind = line.tokens[0];
    if (kind == "var") {
      auto v = parse_variable(line);
      if (!var_index.emplace(v.name, vars.size()).second) fail(line, "variable '" + v.name + "' declared twice");
      vars.push_back(std::move(v));
    } else if (kind == "node") {
      if (line.tokens.size() < 3 || line.tokens[2] != "parents") fail(line, "expected node <name> parents ...");
      nodes.emplace_back(line, std::vector<std::string>(line.tokens.begin() + 3, line.tokens.end()));
    } else if (kind == "hidden") {
      if (line.tokens.size() != 2) fail(line, "expected hidden <name>");
      hidden.push_back(line);
    } else if (kind == "focal") {
      if (line.tokens.size() < 3) fail(line, "expected focal <node> <mass> ...");
      focals.push_back(line);
    } else {
      fail(line, "unknown directive '" + kind + "'");
    }
  }

  std::vector<std::string> order;
  for (const auto& [line, parents] : nodes) {
    if (!var_index.count(line.tokens[1])) fail(line, "node '" + line.tokens[1] + "' has no var line");
    if (std::find(order.begin(), order.end(), line.tokens[1]) != order.end())
      fail(line, "node '" + line.tokens[1] + "' declared twice");
    order.push_back(line.tokens[1]);
  }
  for (const auto& v : vars)
    if (std::find(order.begin(), order.end(), v.name) == order.end()) order.push_back(v.name);
  std::vector<Variable> ordered;
  for (const auto& name : order) ordered.push_back(vars[var_index[name]]);

  std::vector<bool> is_hidden(order.size(), false);
  for (const auto& line : hidden) {
    auto it = std::find(order.begin(), order.end(), line.tokens[1]);
    if (it == order.end()) fail(line, "unknown hidden node '" + line.tokens[1] + "'");
    is_hidden[static_cast<std::size_t>(it - order.begin())] = true;
  }
  Dag dag(order, is_hidden);
  for (const auto& [line, parents] : nodes)
    for (const auto& p : parents) {
      if (!dag.index_of(p)) fail(line, "unknown parent '" + p + "'");
      try {
        dag.add_edge(p, line.tokens[1]);
      } catch (const Error& e) {
        fail(line, e.what());
      }
    }

  BeliefNetwork net(ordered, dag);
  std::map<std::size_t, FocalMap> per_node;
  std::map<std::size_t, Line> first_line;
  for (const auto& line : focals) {
    auto idx = dag.index_of(line.tokens[1]);
    if (!idx) fail(line, "focal for unknown node '" + line.tokens[1] + "'");
    auto frame = net.node_frame(*idx);
    double mass = parse_number(line, line.tokens[2]);
    per_node[*idx][parse_set(line, frame, 3)] += mass;
    first_line.emplace(*idx, line);
  }
  for (auto& [idx, map] : per_node) {
    try {
      net.set_valuation(idx, MassFunction::from_focals(net.node_frame(idx), map, true));
    } catch (const Error& e) {
      fail(first_line[idx], "valuation of '" + dag.name(idx) + "': " + e.what());
    }
  }
  return net;
}

// ---------------------------------------------------------------------------

std::string write_sample(const Population& pop) {
  const auto& frame = pop.frame;
  std::string out = "vars";
  for (const auto& v : frame.variables()) out += " " + checked(v.name);
  out += "\n";
  for (const auto& v : frame.variables()) {
    out += "domain " + v.name;
    for (const auto& x : v.domain) out += " " + checked(x);
    out += "\n";
  }
  for (const auto& obj : pop.objects) {
    if (!obj.active()) continue;
    auto factors = factorize_product(frame, obj.effective());
    if (!factors) throw Error(Errc::InvalidArgument, "sample rows need product-form value sets");
    std::vector<std::string> cells;
    for (std::size_t v = 0; v < frame.size(); ++v) {
      const auto& var = frame.variable(v);
      if ((*factors)[v].size() == var.domain.size()) {
        cells.push_back("*");
        continue;
      }
      std::vector<std::string> values;
      for (auto x : (*factors)[v]) values.push_back(var.domain[x]);
      cells.push_back(join(values, "|"));
    }
    out += join(cells, " ") + "\n";
  }
  return out;
}

Population read_sample(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0].tokens[0] != "vars") throw Error(Errc::Parse, "sample must start with a vars line");
  const auto& header = lines[0];
  std::vector<std::string> names(header.tokens.begin() + 1, header.tokens.end());
  if (names.empty()) fail(header, "no variables");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second) fail(header, "variable '" + names[i] + "' listed twice");

  std::vector<std::vector<std::string>> domains(names.size());
  std::vector<bool> declared(names.size(), false);
  std::vector<const Line*> rows;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    if (line.tokens[0] == "domain") {
      if (line.tokens.size() < 3) fail(line, "domain needs a variable and values");
      auto it = index.find(line.tokens[1]);
      if (it == index.end()) fail(line, "domain for unknown variable '" + line.tokens[1] + "'");
      if (declared[it->second]) fail(line, "domain of '" + line.tokens[1] + "' given twice");
      declared[it->second] = true;
      domains[it->second].assign(line.tokens.begin() + 2, line.tokens.end());
      continue;
    }
    if (line.tokens.size() != names.size()) fail(line, "row has the wrong number of cells");
    rows.push_back(&line);
  }
  for (const auto* row : rows)
    for (std::size_t v = 0; v < names.size(); ++v) {
      if (declared[v] || row->tokens[v] == "*") continue;
      for (const auto& x : split(row->tokens[v], '|'))
        if (std::find(domains[v].begin(), domains[v].end(), x) == domains[v].end()) domains[v].push_back(x);
    }
  std::vector<Variable> vars;
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (domains[v].empty()) fail(header, "no values known for '" + names[v] + "'");
    vars.push_back({names[v], domains[v]});
  }
  Population pop{Frame(vars), {}};
  const auto full = ConfigSet::full(pop.frame.config_count());
  for (const auto* row : rows) {
    std::vector<std::vector<std::string>> labels;
    for (std::size_t v = 0; v < names.size(); ++v) {
      if (row->tokens[v] == "*") {
        labels.push_back(domains[v]);
        continue;
      }
      auto values = split(row->tokens[v], '|');
      for (const auto& x : values)
        if (std::find(domains[v].begin(), domains[v].end(), x) == domains[v].end())
          fail(*row, "value '" + x + "' not in the domain of '" + names[v] + "'");
      labels.push_back(values);
    }
    pop.objects.push_back({product_set(pop.frame, labels), full});
  }
  return pop;
}

// ---------------------------------------------------------------------------

std::string write_mass(const MassFunction& m) {
  std::string out;
  for (const auto& v : m.frame().variables()) out += variable_line(v);
  for (const auto& [set, mass] : m.focals()) {
    auto text = format_set(m.frame(), set);
    out += "focal " + format_number(mass) + (text.empty() ? "" : " " + text) + "\n";
  }
  return out;
}

MassFunction read_mass(std::string_view text) {
  std::vector<Variable> vars;
  std::vector<Line> focals;
  for (const auto& line : split_lines(text)) {
    if (line.tokens[0] == "var") {
      if (!focals.empty()) fail(line, "var lines must come before focal lines");
      vars.push_back(parse_variable(line));
    } else if (line.tokens[0] == "focal") {
      if (line.tokens.size() < 2) fail(line, "expected focal <mass> ...");
      focals.push_back(line);
    } else {
      fail(line, "unknown directive '" + line.tokens[0] + "'");
    }
  }
  if (vars.empty()) throw Error(Errc::Parse, "mass file declares no variables");
  Frame frame(vars);
  FocalMap map;
  for (const auto& line : focals) map[parse_set(line, frame, 2)] += parse_number(line, line.tokens[1]);
  if (map.empty()) throw Error(Errc::Parse, "mass file has no focal lines");
  return MassFunction::from_focals(frame, map, true);
}

// ---------------------------------------------------------------------------

std::string write_pipg(const Pipg& g) {
  std::string out;
  for (const auto& n : g.names()) out += "node " + checked(n) + "\n";
  for (auto [a, b] : g.edges()) {
    std::string marks{mark_char(g.mark(a, b), true), '-', mark_char(g.mark(b, a), false)};
    out += "edge " + g.name(a) + " " + marks + " " + g.name(b) + "\n";
  }
  for (const auto& [a, b, c] : g.constraints())
    out += "noncollider " + g.name(a) + " " + g.name(b) + " " + g.name(c) + "\n";
  for (const auto& [pair, set] : g.sepsets()) {
    out += "sepset " + g.name(pair.first) + " " + g.name(pair.second) + " :";
    for (auto s : set) out += " " + g.name(s);
    out += "\n";
  }
  return out;
}

Pipg read_pipg(std::string_view text) {
  auto lines = split_lines(text);
  std::vector<std::string> names;
  for (const auto& line : lines)
    if (line.tokens[0] == "node") {
      if (line.tokens.size() != 2) fail(line, "expected node <name>");
      names.push_back(line.tokens[1]);
    }
  Pipg g;
  try {
    g = Pipg(names);
  } catch (const Error& e) {
    throw Error(Errc::Parse, e.what());
  }
  auto node = [&](const Line& line, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) fail(line, "unknown node '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  for (const auto& line : lines) {
    const auto& kind = line.tokens[0];
    if (kind == "node") continue;
    if (kind == "edge") {
      if (line.tokens.size() != 4 || line.tokens[2].size() != 3 || line.tokens[2][1] != '-')
        fail(line, "expected edge <a> <marks> <b>");
      auto at_a = parse_mark(line.tokens[2][0], true);
      auto at_b = parse_mark(line.tokens[2][2], false);
      if (!at_a || !at_b) fail(line, "bad edge marks '" + line.tokens[2] + "'");
      auto a = node(line, line.tokens[1]), b = node(line, line.tokens[3]);
      if (a == b || g.adjacent(a, b)) fail(line, "self loop or repeated edge");
      g.add_edge(a, b, *at_a, *at_b);
    } else if (kind == "noncollider") {
      if (line.tokens.size() != 4) fail(line, "expected noncollider <a> <b> <c>");
      g.add_constraint(node(line, line.tokens[1]), node(line, line.tokens[2]), node(line, line.tokens[3]));
    } else if (kind == "sepset") {
      if (line.tokens.size() < 4 || line.tokens[3] != ":") fail(line, "expected sepset <a> <b> : ...");
      NodeSet s;
      for (std::size_t i = 4; i < line.tokens.size(); ++i) s.push_back(node(line, line.tokens[i]));
      g.set_sepset(node(line, line.tokens[1]), node(line, line.tokens[2]), s);
    } else {
      fail(line, "unknown directive '" + kind + "'");
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

std::string write_hypergraph(const Hypergraph& h) {
  std::string out;
  for (const auto& e : h.hyperedges()) {
    std::vector<std::string> vs;
    for (const auto& v : e) vs.push_back(checked(v));
    out += join(vs, " ") + "\n";
  }
  return out;
}

Hypergraph read_hypergraph(std::string_view text) {
  std::vector<Hyperedge> edges;
  for (const auto& line : split_lines(text)) edges.push_back(line.tokens);
  return Hypergraph(std::move(edges));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::Io, "write to '" + path + "' failed");
}

}  // namespace dsbn
