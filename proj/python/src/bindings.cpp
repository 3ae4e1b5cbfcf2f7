#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsbn/ci.hpp"
#include "dsbn/hyper.hpp"
#include "dsbn/io.hpp"
#include "dsbn/learn.hpp"

namespace py = pybind11;
using namespace dsbn;

namespace {

py::list focal_list(const MassFunction& m) {
  py::list out;
  for (const auto& [set, mass] : m.focals()) {
    std::vector<std::uint32_t> configs(set.begin(), set.end());
    out.append(py::make_tuple(configs, mass));
  }
  return out;
}

py::dict structure(const Dag& dag) {
  auto s = summarize_structure(dag);
  py::dict d;
  d["edges"] = s.edges;
  d["colliders"] = s.colliders;
  return d;
}

ModelShape shape_of(const std::string& s) {
  if (s == "tree") return ModelShape::Tree;
  if (s == "polytree") return ModelShape::Polytree;
  throw Error(Errc::InvalidArgument, "shape must be 'tree' or 'polytree'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dempster-Shafer belief network structure learning";
  py::register_exception<Error>(m, "DsbnError", PyExc_ValueError);

  py::class_<MassFunction>(m, "MassFunction")
      .def_property_readonly("variables", [](const MassFunction& x) { return x.frame().names(); })
      .def_property_readonly("pseudo", &MassFunction::pseudo)
      .def("focals", &focal_list, "List of (configuration indices, mass) pairs")
      .def("__len__", &MassFunction::focal_count)
      .def("__str__", [](const MassFunction& x) { return write_mass(x); });

  py::class_<BeliefNetwork>(m, "BeliefNetwork")
      .def_property_readonly("nodes", [](const BeliefNetwork& n) { return n.dag().names(); })
      .def_property_readonly("edges",
                             [](const BeliefNetwork& n) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (auto [a, b] : n.dag().edges()) out.emplace_back(n.dag().name(a), n.dag().name(b));
                               return out;
                             })
      .def("hidden", [](const BeliefNetwork& n) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n.dag().size(); ++i)
          if (n.dag().hidden(i)) out.push_back(n.dag().name(i));
        return out;
      })
      .def("structure", [](const BeliefNetwork& n) { return structure(n.dag()); })
      .def("__str__", [](const BeliefNetwork& n) { return write_network(n); });

  py::class_<Population>(m, "Population")
      .def_property_readonly("variables", [](const Population& p) { return p.frame.names(); })
      .def("__len__", &Population::active_count)
      .def("__str__", [](const Population& p) { return write_sample(p); });

  py::class_<Pipg>(m, "Pipg")
      .def_property_readonly("nodes", &Pipg::names)
      .def("bidirected", [](const Pipg& g, const std::string& a, const std::string& b) {
        return g.bidirected(g.require_index(a), g.require_index(b));
      })
      .def("__eq__", [](const Pipg& a, const Pipg& b) { return a == b; })
      .def("__str__", [](const Pipg& g) { return write_pipg(g); });

  py::class_<Hypergraph>(m, "Hypergraph")
      .def(py::init([](std::vector<Hyperedge> edges) { return Hypergraph(std::move(edges)); }))
      .def_property_readonly("vertices", &Hypergraph::vertices)
      .def_property_readonly("hyperedges", &Hypergraph::hyperedges)
      .def("__eq__", [](const Hypergraph& a, const Hypergraph& b) { return a == b; })
      .def("__str__", [](const Hypergraph& h) { return write_hypergraph(h); });

  py::class_<HypertreeSeq>(m, "HypertreeSeq")
      .def_readonly("hyperedges", &HypertreeSeq::hyperedges)
      .def_readonly("branch", &HypertreeSeq::branch);

  m.def("read_network", &read_network, py::arg("text"));
  m.def("read_sample", &read_sample, py::arg("text"));
  m.def("read_mass", &read_mass, py::arg("text"));
  m.def("read_pipg", &read_pipg, py::arg("text"));
  m.def("read_hypergraph", &read_hypergraph, py::arg("text"));

  m.def(
      "random_model",
      [](const std::string& shape, std::size_t n_vars, std::size_t domain_size, std::size_t focals, std::uint64_t seed) {
        return random_model({shape_of(shape), n_vars, domain_size, focals, seed});
      },
      py::arg("shape") = "tree", py::arg("n_vars") = 6, py::arg("domain_size") = 2, py::arg("focals") = 3,
      py::arg("seed") = 0);
  m.def("sample_network", &sample_network, py::arg("net"), py::arg("n"), py::arg("seed") = 0);
  m.def("joint", &joint, py::arg("net"));
  m.def("empirical_mass", &empirical_mass, py::arg("population"));
  m.def("combine", &combine);
  m.def("marginalize", [](const MassFunction& x, const VarNames& names) { return marginalize(x, names); });
  m.def("delta", &delta, py::arg("reference"), py::arg("approximation"));
  m.def("dep_bn", &dep_bn, py::arg("mass"), py::arg("x"), py::arg("y"));

  m.def(
      "chi2_marginal",
      [](const Population& pop, const VarNames& x, const VarNames& y, double alpha) {
        auto r = chi2_marginal(Source::from_population(pop), x, y, alpha);
        return py::dict(py::arg("statistic") = r.statistic, py::arg("df") = r.df, py::arg("p_value") = r.p_value,
                        py::arg("independent") = r.independent);
      },
      py::arg("population"), py::arg("x"), py::arg("y"), py::arg("alpha") = kDefaultTestAlpha);
  m.def(
      "cond_indep",
      [](const Population& pop, const VarNames& x, const VarNames& y, const VarNames& z, double alpha) {
        auto r = cond_indep(Source::from_population(pop), x, y, z, alpha);
        return py::dict(py::arg("statistic") = r.statistic, py::arg("df") = r.df, py::arg("p_value") = r.p_value,
                        py::arg("independent") = r.independent);
      },
      py::arg("population"), py::arg("x"), py::arg("y"), py::arg("z"), py::arg("alpha") = kDefaultTestAlpha);

  m.def(
      "learn_tree",
      [](const Population& pop, std::optional<std::string> root) {
        auto r = learn_tree(pop, root);
        return py::make_tuple(r.network, r.warnings);
      },
      py::arg("population"), py::arg("root") = py::none());
  m.def(
      "learn_polytree",
      [](const Population& pop, double alpha, bool negative_means_collider) {
        PolytreeOptions options{alpha, negative_means_collider ? SignConvention::NegativeMeansCollider
                                                  : SignConvention::NonNegativeMeansCollider};
        auto r = learn_polytree(pop, options);
        return py::make_tuple(r.network, r.warnings);
      },
      py::arg("population"), py::arg("alpha") = 1.0, py::arg("negative_means_collider") = false);
  m.def(
      "frkci",
      [](const Population& pop, std::size_t k, double alpha) {
        auto r = frkci(pop, {k, alpha});
        py::dict d;
        d["pipg"] = r.finalized ? *r.finalized : r.pipg;
        d["network"] = r.network ? py::cast(*r.network) : py::none();
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("population"), py::arg("k") = 2, py::arg("alpha") = kDefaultTestAlpha);

  m.def("reduce_hypergraph", &reduce_hypergraph);
  m.def("construction_sequence", &construction_sequence);
  m.def("induced_hypergraph", py::overload_cast<const BeliefNetwork&>(&induced_hypergraph));
  m.def("network_from_hypertree", &network_from_hypertree, py::arg("sequence"), py::arg("valuations"));
}
