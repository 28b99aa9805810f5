#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coarse/cayley.hpp"
#include "coarse/embed.hpp"
#include "coarse/graphs.hpp"
#include "coarse/obstruction.hpp"
#include "coarse/spectral.hpp"
#include "coarse/transport.hpp"

namespace py = pybind11;
using namespace coarse;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Embedding to_embedding(const FiniteGraph &g, const DoubleArray &coords) {
  if (coords.ndim() != 2 || coords.shape(0) != g.vertex_count())
    throw std::invalid_argument("coords must have shape (vertex_count, dim)");
  const auto n = static_cast<int>(coords.shape(0));
  const auto dim = static_cast<int>(coords.shape(1));
  std::vector<double> flat(coords.data(), coords.data() + coords.size());
  return Embedding(n, dim, std::move(flat));
}

DoubleArray to_array(const Embedding &e) {
  DoubleArray out({e.vertex_count(), e.dim()});
  auto *dst = out.mutable_data();
  for (int v = 0; v < e.vertex_count(); ++v)
    for (int k = 0; k < e.dim(); ++k)
      *dst++ = e.point(v)[k];
  return out;
}

MetricSpaceTable to_table(const DoubleArray &d) {
  if (d.ndim() != 2 || d.shape(0) != d.shape(1))
    throw std::invalid_argument("distances must be a square matrix");
  return MetricSpaceTable(static_cast<int>(d.shape(0)),
                          std::vector<double>(d.data(), d.data() + d.size()));
}

py::tuple rational_tuple(const Rational &r) { return py::make_tuple(r.num(), r.den()); }

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "coarse_geom native core";
  m.attr("__version__") = "0.1.0";

  py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

  py::class_<FiniteGraph>(m, "FiniteGraph")
      .def_property_readonly("vertex_count", &FiniteGraph::vertex_count)
      .def_property_readonly("edge_count", &FiniteGraph::edge_count)
      .def_property_readonly("max_degree", &FiniteGraph::max_degree)
      .def_property_readonly("connected", &FiniteGraph::connected)
      .def("degree", &FiniteGraph::degree)
      .def("neighbors",
           [](const FiniteGraph &g, Vertex v) {
             if (v < 0 || v >= g.vertex_count())
               throw py::index_error("vertex out of range");
             auto s = g.neighbors(v);
             return std::vector<Vertex>(s.begin(), s.end());
           })
      .def("edges",
           [](const FiniteGraph &g) {
             std::vector<std::pair<Vertex, Vertex>> out;
             for (const auto &e : g.edges())
               out.emplace_back(e.u, e.v);
             return out;
           })
      .def("__repr__", [](const FiniteGraph &g) {
        return "<FiniteGraph n=" + std::to_string(g.vertex_count()) +
               " m=" + std::to_string(g.edge_count()) + ">";
      });

  m.def(
      "build_graph",
      [](int n, const std::vector<std::pair<Vertex, Vertex>> &edges) {
        std::vector<Edge> es;
        for (auto [u, v] : edges)
          es.push_back({u, v});
        return build_graph(n, std::move(es));
      },
      py::arg("vertex_count"), py::arg("edges"));
  m.def("path_graph", &path_graph, py::arg("n"));
  m.def("cycle_graph", &cycle_graph, py::arg("n"));
  m.def("complete_graph", &complete_graph, py::arg("n"));
  m.def("margulis_graph", &margulis_graph, py::arg("n"));
  m.def("random_regular", &random_regular, py::arg("n"), py::arg("degree"), py::arg("seed"));
  m.def("bfs_distances", &bfs_distances, py::arg("graph"), py::arg("source"));
  m.def("graph_distance", &graph_distance, py::arg("graph"), py::arg("u"), py::arg("v"));
  m.def(
      "conductance_exact",
      [](const FiniteGraph &g) {
        auto r = conductance_exact(g);
        return py::make_tuple(rational_tuple(r.value), r.witness);
      },
      py::arg("graph"), "((num, den), witness set) of the exact vertex conductance.");
  m.def(
      "edge_expansion_exact",
      [](const FiniteGraph &g) {
        auto [h, w] = edge_expansion_exact(g);
        return py::make_tuple(rational_tuple(h), w);
      },
      py::arg("graph"));

  py::class_<SpectralCertificate>(m, "SpectralCertificate")
      .def_readonly("lambda1", &SpectralCertificate::lambda1)
      .def_readonly("witness", &SpectralCertificate::witness)
      .def_readonly("degree", &SpectralCertificate::degree)
      .def_readonly("conductance_lower_bound", &SpectralCertificate::conductance_lower_bound);

  m.def(
      "lambda1",
      [](const FiniteGraph &g, const std::string &method) {
        EigenMethod em = EigenMethod::automatic;
        if (method == "dense")
          em = EigenMethod::dense;
        else if (method == "iterative")
          em = EigenMethod::iterative;
        else if (method != "automatic")
          throw std::invalid_argument("method must be automatic, dense or iterative");
        return lambda1(g, em);
      },
      py::arg("graph"), py::arg("method") = "automatic");
  m.def(
      "rayleigh_quotient",
      [](const FiniteGraph &g, const std::vector<double> &f) { return rayleigh_quotient(g, f); },
      py::arg("graph"), py::arg("f"));

  py::class_<FamilyCertification>(m, "FamilyCertification")
      .def_readonly("certificates", &FamilyCertification::certificates)
      .def_readonly("delta", &FamilyCertification::delta)
      .def_readonly("decay_exponent", &FamilyCertification::decay_exponent)
      .def_readonly("uniformly_gapped", &FamilyCertification::uniformly_gapped);

  py::class_<ExpanderFamily>(m, "ExpanderFamily")
      .def_readonly("sizes", &ExpanderFamily::sizes)
      .def_readonly("degree", &ExpanderFamily::degree)
      .def_readonly("members", &ExpanderFamily::members)
      .def_property_readonly("kind",
                             [](const ExpanderFamily &f) { return std::string(to_string(f.kind)); });

  m.def(
      "make_family",
      [](const std::string &kind, std::vector<int> sizes, int degree, std::uint64_t seed) {
        return make_family(parse_family_kind(kind), std::move(sizes), degree, seed);
      },
      py::arg("kind"), py::arg("sizes"), py::arg("degree") = 4, py::arg("seed") = 0);
  m.def("certify_family", &certify_family, py::arg("family"));

  m.def("c0_bound", py::overload_cast<const FiniteGraph &>(&c0_bound), py::arg("graph"));
  m.def(
      "lipschitz_constant",
      [](const FiniteGraph &g, const DoubleArray &x) { return lipschitz_constant(g, to_embedding(g, x)); },
      py::arg("graph"), py::arg("coords"));
  m.def(
      "d_ratio", [](const FiniteGraph &g, const DoubleArray &x) { return d_ratio(g, to_embedding(g, x)); },
      py::arg("graph"), py::arg("coords"));
  m.def(
      "spectral_embedding",
      [](const FiniteGraph &g, int dim) { return to_array(spectral_embedding(g, dim)); },
      py::arg("graph"), py::arg("dim"));
  m.def(
      "max_spread_embedding",
      [](const FiniteGraph &g, int dim, int iters, std::uint64_t seed) {
        auto r = max_spread_embedding(g, dim, iters, seed);
        return py::make_tuple(to_array(r.embedding), r.spread, r.trace);
      },
      py::arg("graph"), py::arg("dim"), py::arg("iters"), py::arg("seed"),
      "(coords, spread, trace) of the projected-ascent optimiser.");

  m.def(
      "kr_distance",
      [](const std::vector<int> &mu_support, const std::vector<double> &mu_weights,
         const std::vector<int> &nu_support, const std::vector<double> &nu_weights,
         const DoubleArray &distances) {
        return kr_distance(FiniteMeasure(mu_support, mu_weights), FiniteMeasure(nu_support, nu_weights),
                           to_table(distances));
      },
      py::arg("mu_support"), py::arg("mu_weights"), py::arg("nu_support"), py::arg("nu_weights"),
      py::arg("distances"));
  m.def(
      "graph_metric",
      [](const FiniteGraph &g) {
        auto t = MetricSpaceTable::from_graph(g);
        DoubleArray out({t.size(), t.size()});
        auto *dst = out.mutable_data();
        for (int i = 0; i < t.size(); ++i)
          for (int j = 0; j < t.size(); ++j)
            *dst++ = t(i, j);
        return out;
      },
      py::arg("graph"));

  py::class_<MarkedGroup>(m, "MarkedGroup")
      .def_static("free_abelian", &MarkedGroup::free_abelian, py::arg("rank"))
      .def_static("free", &MarkedGroup::free, py::arg("rank"))
      .def_static("cyclic_product", &MarkedGroup::cyclic_product, py::arg("n"), py::arg("m"))
      .def_static("sl2_mod_p", &MarkedGroup::sl2_mod_p, py::arg("p"))
      .def_property_readonly("finite", &MarkedGroup::finite)
      .def("identity", &MarkedGroup::identity)
      .def("multiply", &MarkedGroup::multiply)
      .def("inverse", &MarkedGroup::inverse);

  py::class_<CayleyBall>(m, "CayleyBall")
      .def_property_readonly("radius", &CayleyBall::radius)
      .def_property_readonly("size", &CayleyBall::size)
      .def("norm", &CayleyBall::norm)
      .def("index_of", &CayleyBall::index_of)
      .def("graph", &CayleyBall::graph)
      .def("word_norm", [](const CayleyBall &b, const Element &g) { return word_norm(b, g); })
      .def("word_distance",
           [](const CayleyBall &b, const Element &x, const Element &y) { return word_distance(b, x, y); });
  m.def(
      "cayley_ball", [](const MarkedGroup &g, int radius) { return cayley_ball(g, radius); },
      py::arg("group"), py::arg("radius"));

  py::class_<DisplacementResult>(m, "DisplacementResult")
      .def_readonly("passed", &DisplacementResult::pass)
      .def_readonly("generator_checks", &DisplacementResult::generator_checks)
      .def_readonly("spot_checks", &DisplacementResult::spot_checks)
      .def_property_readonly("worst", [](const DisplacementResult &r) {
        return py::make_tuple(r.worst.gamma, r.worst.x, r.worst.displacement, r.worst.norm);
      });
  m.def(
      "displacement_check_z2",
      [](const PointMap &p, int radius, int spot_samples, std::uint64_t seed) {
        auto ball = cayley_ball(MarkedGroup::free_abelian(2), radius);
        std::vector<Point> points;
        for (int i = 0; i < ball.size(); ++i)
          points.push_back(ball.element(i));
        return displacement_check(ball, translation_action(), p, points, {}, spot_samples, seed);
      },
      py::arg("p"), py::arg("radius"), py::arg("spot_samples") = 1000, py::arg("seed") = 1,
      "Checks |p(gamma x) - p(x)| <= |gamma| for Z^2 acting on itself by translation, with "
      "x in the l1 ball of the given radius.");

  py::class_<RadialMap>(m, "RadialMap")
      .def_readonly("domain_radius", &RadialMap::domain_radius)
      .def_readonly("r0", &RadialMap::r0)
      .def_readonly("epsilon", &RadialMap::epsilon)
      .def_readonly("profile", &RadialMap::profile)
      .def_readonly("max_generator_displacement", &RadialMap::max_generator_displacement)
      .def_readonly("winding_number", &RadialMap::winding_number)
      .def_property_readonly("displacement_ok", &RadialMap::displacement_ok)
      .def("__call__", [](const RadialMap &r, std::int64_t x, std::int64_t y) { return r({x, y}); });
  m.def(
      "radial_map", [](int radius, double r0, double eps) { return radial_map_build(radius, r0, eps); },
      py::arg("radius"), py::arg("r0") = 2.0, py::arg("epsilon") = 0.1);

  m.def(
      "obstruction_bound",
      [](const ExpanderFamily &fam, const std::string &baseline, int iters, std::uint64_t seed, int threads) {
        ObstructionOptions opt;
        opt.baseline = parse_baseline(baseline);
        opt.iters = iters;
        opt.seed = seed;
        opt.threads = threads;
        const auto rep = obstruction_bound(fam, opt);
        py::list rows;
        for (const auto &r : rep.rows) {
          py::dict d;
          d["n"] = r.n;
          d["d_max"] = r.d_max;
          d["lambda1"] = r.lambda1;
          d["c0"] = r.c0;
          d["member_c0"] = r.member_c0;
          d["R"] = r.r;
          d["c_of_R"] = r.c_of_r;
          d["capacity"] = r.capacity;
          d["forced_fraction"] = r.forced_fraction;
          d["baseline_fraction"] = r.baseline_fraction;
          d["witness_fraction"] = r.witness_fraction;
          d["verdict"] = r.verdict;
          rows.append(d);
        }
        return py::make_tuple(rows, rep.uniformly_gapped, rep.family_c0);
      },
      py::arg("family"), py::arg("baseline") = "spectral", py::arg("iters") = 300, py::arg("seed") = 1,
      py::arg("threads") = 1, "(rows, uniformly_gapped, family_c0).");
}
