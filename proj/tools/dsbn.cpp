#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dsbn/ci.hpp"
#include "dsbn/io.hpp"
#include "dsbn/learn.hpp"

using namespace dsbn;

namespace {

void emit(std::ostream& out, const std::string& key, const std::string& value) { out << key << '\t' << value << '\n'; }

std::string number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) emit(std::cerr, "warning", w);
}

void report_structure(const Dag& dag) {
  auto summary = summarize_structure(dag);
  for (const auto& [a, b] : summary.edges) emit(std::cout, "edge", a + "-" + b);
  for (const auto& [a, m, b] : summary.colliders) emit(std::cout, "collider", a + "->" + m + "<-" + b);
}

ModelShape parse_shape(const std::string& s) { return s == "polytree" ? ModelShape::Polytree : ModelShape::Tree; }

bool starts_with_vars(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  while (i != std::string::npos && text[i] == '#') {
    i = text.find('\n', i);
    if (i != std::string::npos) i = text.find_first_not_of(" \t\r\n", i);
  }
  return i != std::string::npos && text.compare(i, 5, "vars ") == 0;
}

// Rate of seeds whose learned structure matches the generator.
double recovery_rate(ModelShape shape, std::size_t vars, std::size_t samples, std::size_t runs, std::uint64_t seed) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    auto model_seed = seed + r;
    auto net = random_model({shape, vars, 2, 3, model_seed});
    auto pop = sample_network(net, samples, model_seed ^ 0x5eedULL);
    auto truth = summarize_structure(net.dag());
    try {
      if (shape == ModelShape::Tree) {
        hits += summarize_structure(learn_tree(pop).network.dag()).edges == truth.edges;
      } else {
        hits += summarize_structure(learn_polytree(pop).network.dag()) == truth;
      }
    } catch (const Error&) {
    }
  }
  return static_cast<double>(hits) / static_cast<double>(runs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning for Dempster-Shafer belief networks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out;

  auto* gen = app.add_subcommand("gen", "Write a random belief network");
  std::string shape = "tree";
  std::size_t vars = 6, domain = 2, focals = 3;
  gen->add_option("--shape", shape)->check(CLI::IsMember({"tree", "polytree"}));
  gen->add_option("--vars", vars)->check(CLI::Range(3, 64));
  gen->add_option("--domain", domain)->check(CLI::Range(2, 64));
  gen->add_option("--focals", focals, "Focal sets per parent configuration")->check(CLI::Range(1, 64));
  gen->add_option("--seed", seed);
  gen->add_option("--out", out);

  auto* sample = app.add_subcommand("sample", "Draw a sample from a network");
  std::string network_path;
  std::size_t samples = 1000;
  sample->add_option("network", network_path)->required();
  sample->add_option("--samples,-n", samples)->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed);
  sample->add_option("--out", out);

  auto* learn = app.add_subcommand("learn", "Learn a network from a sample");
  std::string sample_path, algo = "tree", pipg_path;
  std::optional<std::string> root;
  double alpha = -1.0;
  std::size_t k = 2;
  bool negative_means_collider = false;
  learn->add_option("sample", sample_path)->required();
  learn->add_option("--algo", algo)->check(CLI::IsMember({"tree", "polytree", "ci"}));
  learn->add_option("--root", root, "Root variable (tree)");
  learn->add_option("--alpha", alpha, "Test level (ci, default 0.05) or criterion weight (polytree, default 1)");
  learn->add_option("--k", k, "Largest separator size (ci)");
  learn->add_flag("--paper-sign", negative_means_collider, "Head-to-head when the criterion is negative (polytree)");
  learn->add_option("--out", out);
  learn->add_option("--pipg", pipg_path, "Where to write the oriented pipg (ci)");

  auto* test = app.add_subcommand("test", "Independence and relevance tests on a sample");
  std::string kind = "marginal";
  std::vector<std::string> x, y, given;
  test->add_option("sample", sample_path)->required();
  test->add_option("--kind", kind)->check(CLI::IsMember({"marginal", "conditional", "relevance"}));
  test->add_option("--x", x)->required();
  test->add_option("--y", y);
  test->add_option("--given", given);
  test->add_option("--alpha", alpha);

  auto* eval = app.add_subcommand("eval", "Compare a network with another network or a sample");
  std::string other_path;
  eval->add_option("reference", network_path, "Reference network")->required();
  eval->add_option("other", other_path, "Approximating network or sample")->required();

  auto* experiment = app.add_subcommand("experiment", "Recovery rates against sample size");
  std::size_t runs = 100;
  std::vector<std::size_t> sizes{200, 1000, 5000};
  experiment->add_option("--runs", runs)->check(CLI::PositiveNumber);
  experiment->add_option("--vars", vars)->check(CLI::Range(3, 16));
  experiment->add_option("--samples", sizes, "Sample sizes")->check(CLI::PositiveNumber);
  experiment->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      output(out, write_network(random_model({parse_shape(shape), vars, domain, focals, seed})));
    } else if (*sample) {
      auto net = read_network(read_file(network_path));
      output(out, write_sample(sample_network(net, samples, seed)));
    } else if (*learn) {
      auto pop = read_sample(read_file(sample_path));
      if (algo == "ci") {
        CiOptions options;
        options.k = k;
        if (alpha > 0) options.alpha = alpha;
        auto result = frkci(pop, options);
        report_warnings(result.warnings);
        if (!pipg_path.empty()) write_file(pipg_path, write_pipg(result.finalized ? *result.finalized : result.pipg));
        if (!result.network) {
          emit(std::cerr, "error", "finalization failed; no network written");
          return 2;
        }
        output(out, write_network(*result.network));
        if (!out.empty()) report_structure(result.network->dag());
      } else {
        LearnResult result;
        if (algo == "tree") {
          result = learn_tree(pop, root);
        } else {
          PolytreeOptions options;
          if (alpha > 0) options.alpha = alpha;
          if (negative_means_collider) options.sign = SignConvention::NegativeMeansCollider;
          result = learn_polytree(pop, options);
        }
        report_warnings(result.warnings);
        output(out, write_network(result.network));
        if (!out.empty()) report_structure(result.network.dag());
      }
    } else if (*test) {
      auto source = Source::from_population(read_sample(read_file(sample_path)));
      double level = alpha > 0 ? alpha : kDefaultTestAlpha;
      if (kind == "relevance") {
        if (x.size() != 1) throw Error(Errc::InvalidArgument, "relevance takes exactly one --x variable");
        auto r = variable_relevance(source, x[0]);
        emit(std::cout, "score", number(r.score));
        if (r.interval) emit(std::cout, "interval", number(r.interval->first) + "," + number(r.interval->second));
      } else {
        if (y.empty()) throw Error(Errc::InvalidArgument, "--y is required for independence tests");
        if (kind == "marginal" && !given.empty()) throw Error(Errc::InvalidArgument, "--given needs --kind conditional");
        auto r = kind == "marginal" ? chi2_marginal(source, x, y, level) : cond_indep(source, x, y, given, level);
        emit(std::cout, "statistic", number(r.statistic));
        emit(std::cout, "df", std::to_string(r.df));
        emit(std::cout, "p_value", number(r.p_value));
        emit(std::cout, "decision", r.independent ? "independent" : "dependent");
      }
    } else if (*eval) {
      auto reference = read_network(read_file(network_path));
      auto names = reference.visible_names();
      auto ref_joint = marginalize(joint(reference), names);
      auto other_text = read_file(other_path);
      MassFunction approx = starts_with_vars(other_text) ? empirical_mass(read_sample(other_text))
                                                         : joint(read_network(other_text));
      for (const auto& n : names)
        if (!approx.frame().contains(n)) throw Error(Errc::FrameMismatch, "'" + n + "' missing from " + other_path);
      approx = marginalize(approx, names);
      if (!approx.frame().same_variables(ref_joint.frame()))
        throw Error(Errc::FrameMismatch, "the two inputs have different domains");
      emit(std::cout, "delta", number(delta(ref_joint, approx)));
      for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b)
          emit(std::cout, "dep\t" + names[a] + "\t" + names[b], number(dep_bn(ref_joint, names[a], names[b])));
    } else if (*experiment) {
      emit(std::cout, "vars", std::to_string(vars));
      emit(std::cout, "runs", std::to_string(runs));
      for (auto model : {ModelShape::Tree, ModelShape::Polytree}) {
        const char* label = model == ModelShape::Tree ? "tree" : "polytree";
        for (auto n : sizes)
          emit(std::cout, std::string(label) + "_N" + std::to_string(n), number(recovery_rate(model, vars, n, runs, seed)));
      }
    }
  } catch (const Error& e) {
    emit(std::cerr, "error", e.what());
    return 1;
  }
  return 0;
}
