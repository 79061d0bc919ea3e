#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcl/concentration.hpp"
#include "mcl/dataset_io.hpp"
#include "mcl/decision_function.hpp"
#include "mcl/experiments.hpp"
#include "mcl/metric_tree.hpp"
#include "mcl/vc.hpp"
#include "mcl/version.hpp"

#include <sstream>

namespace py = pybind11;
using namespace mcl;

namespace {

std::vector<int> point_bits_list(const Point& p, std::uint32_t dim) {
  std::vector<int> out(dim);
  for (std::uint32_t i = 0; i < dim; ++i) out[i] = p.get_bit(i) ? 1 : 0;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "metric-tree exact similarity search and concentration-of-measure lab";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "MclError");

  py::enum_<DomainKind>(m, "DomainKind")
      .value("hamming", DomainKind::hamming)
      .value("unit_cube", DomainKind::unit_cube)
      .value("gaussian", DomainKind::gaussian)
      .value("sphere", DomainKind::sphere);

  py::class_<DomainSpec>(m, "DomainSpec")
      .def_readonly("kind", &DomainSpec::kind)
      .def_readonly("dim", &DomainSpec::dim)
      .def_readonly("norm", &DomainSpec::norm)
      .def("__repr__", [](const DomainSpec& s) {
        std::ostringstream os;
        os << "DomainSpec(" << to_string(s.kind) << ", d=" << s.dim << ")";
        return os.str();
      });
  m.def("make_domain", &make_domain, py::arg("kind"), py::arg("dim"));

  py::class_<Point>(m, "Point")
      .def(py::init([](const std::vector<double>& coords) { return point_from_reals(coords); }))
      .def_static("from_bit_string", &point_from_bit_string)
      .def("reals", [](const Point& p) { return p.reals; })
      .def("bits", &point_bits_list, py::arg("dim"))
      .def("__eq__", [](const Point& a, const Point& b) { return a == b; });

  m.def("distance", &distance, py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("sample_points", &sample_points, py::arg("spec"), py::arg("seed"), py::arg("n"));

  py::class_<DistanceStats>(m, "DistanceStats")
      .def_readonly("mean", &DistanceStats::mean)
      .def_readonly("stddev", &DistanceStats::stddev)
      .def_readonly("pairs", &DistanceStats::pairs)
      .def_readonly("seed", &DistanceStats::seed);
  m.def("mean_distance_estimate", &mean_distance_estimate, py::arg("spec"), py::arg("seed"),
        py::arg("pairs"));

  py::enum_<Strategy>(m, "Strategy")
      .value("vp", Strategy::vp)
      .value("ball", Strategy::ball)
      .value("pivot", Strategy::pivot);

  py::class_<BuildParams>(m, "BuildParams")
      .def(py::init([](Strategy s, std::uint32_t b, std::uint32_t c, std::uint32_t h) {
             return BuildParams{s, b, c, h};
           }),
           py::arg("strategy") = Strategy::vp, py::arg("b") = 16, py::arg("c") = 8,
           py::arg("h") = 64)
      .def_readwrite("strategy", &BuildParams::strategy)
      .def_readwrite("b", &BuildParams::bin_capacity)
      .def_readwrite("c", &BuildParams::candidates)
      .def_readwrite("h", &BuildParams::max_depth);

  py::class_<SearchTrace>(m, "SearchTrace")
      .def_readonly("internal_nodes_visited", &SearchTrace::internal_nodes_visited)
      .def_readonly("decision_evals", &SearchTrace::decision_evals)
      .def_readonly("bins_opened", &SearchTrace::bins_opened)
      .def_readonly("distance_computations", &SearchTrace::distance_computations)
      .def_readonly("result_size", &SearchTrace::result_size)
      .def("cost", &SearchTrace::cost);

  py::class_<MetricTree>(m, "MetricTree")
      .def_property_readonly("node_count", [](const MetricTree& t) { return t.nodes.size(); })
      .def_property_readonly("leaf_count", &MetricTree::leaf_count)
      .def_property_readonly("depth", &MetricTree::depth)
      .def_readonly("dataset_size", &MetricTree::dataset_size);

  m.def("build_tree", &build_tree, py::arg("dataset"), py::arg("spec"), py::arg("params"),
        py::arg("seed"));
  m.def(
      "validate_tree",
      [](const MetricTree& tree, const std::vector<Point>& data) {
        const ValidationReport rep = validate_tree(tree, data);
        std::vector<std::pair<std::uint32_t, std::string>> violations;
        for (const auto& v : rep.violations) violations.emplace_back(v.node, v.what);
        return py::make_tuple(rep.ok, violations);
      },
      py::arg("tree"), py::arg("dataset"));
  m.def(
      "range_search",
      [](const MetricTree& tree, const std::vector<Point>& data, const Point& center,
         double radius) {
        const RangeResult r = range_search(tree, data, {center, radius});
        return py::make_tuple(r.matches, r.trace);
      },
      py::arg("tree"), py::arg("dataset"), py::arg("center"), py::arg("radius"));
  m.def(
      "linear_scan",
      [](const std::vector<Point>& data, const DomainSpec& spec, const Point& center,
         double radius) { return linear_scan(data, spec, {center, radius}); },
      py::arg("dataset"), py::arg("spec"), py::arg("center"), py::arg("radius"));
  m.def(
      "nn_search",
      [](const MetricTree& tree, const std::vector<Point>& data, const Point& center, double r0,
         double growth) {
        const NnResult nn = nn_search(tree, data, center, {r0, growth});
        py::dict out;
        out["index"] = nn.index;
        out["distance"] = nn.distance;
        out["rounds"] = nn.rounds;
        out["certificate_bins_opened"] = nn.certificate_bins_opened;
        out["trace"] = nn.trace;
        return out;
      },
      py::arg("tree"), py::arg("dataset"), py::arg("center"), py::arg("r0") = 0.05,
      py::arg("growth") = 2.0);
  m.def("save_tree", &save_tree, py::arg("path"), py::arg("tree"));
  m.def("load_tree", &load_tree, py::arg("path"));

  m.def("check_lipschitz_vantage_pair",
        [](const DomainSpec& spec, const Point& plus, const Point& minus, std::uint64_t seed,
           std::uint64_t trials) {
          return check_lipschitz(make_vantage_pair(spec, plus, minus), seed, trials);
        });

  m.def("chernoff_okamoto_bound", &chernoff_okamoto_bound, py::arg("eps"), py::arg("d"));
  m.def("halfcube_alpha_exact", &halfcube_alpha_exact, py::arg("d"), py::arg("eps"));
  m.def("binomial_tail_half", &binomial_tail_half, py::arg("d"), py::arg("m"));
  m.def("subspace_alpha_bound", &subspace_alpha_bound, py::arg("alpha_at_half_eps"),
        py::arg("mu_c"));
  m.def(
      "bin_access_prediction",
      [](double mval) {
        const BinAccessPrediction p = bin_access_prediction(mval);
        return py::make_tuple(p.min_bins_met, p.exceptional_measure);
      },
      py::arg("m"));
  m.def("nn_median_prediction", &nn_median_prediction, py::arg("d"), py::arg("n"));

  py::class_<NNRadiusStats>(m, "NNRadiusStats")
      .def_readonly("p10", &NNRadiusStats::p10)
      .def_readonly("median", &NNRadiusStats::median)
      .def_readonly("p90", &NNRadiusStats::p90)
      .def_readonly("mean", &NNRadiusStats::mean)
      .def_readonly("spread", &NNRadiusStats::spread)
      .def_readonly("occupancy", &NNRadiusStats::occupancy)
      .def_readonly("n", &NNRadiusStats::n)
      .def_readonly("d", &NNRadiusStats::d)
      .def_readonly("queries", &NNRadiusStats::queries)
      .def_readonly("seed", &NNRadiusStats::seed);
  m.def("nn_radius_stats", &nn_radius_stats, py::arg("spec"), py::arg("n"), py::arg("queries"),
        py::arg("seed"), py::arg("threads") = 1);

  m.def("goldberg_jerrum_bound", &goldberg_jerrum_bound, py::arg("s"), py::arg("t"));
  m.def("bins_class_bound", &bins_class_bound, py::arg("h"), py::arg("p"),
        py::arg("log_base") = 2.0);
  m.def("sample_size_bound", &sample_size_bound, py::arg("eps"), py::arg("delta"), py::arg("d"),
        py::arg("log_base") = 2.718281828459045235);
  m.def("hamming_balls_vc_upper_bound", &hamming_balls_vc_upper_bound, py::arg("d"));

  m.def(
      "run_experiment_file",
      [](const std::string& config_path) {
        ExperimentConfig cfg = load_config(config_path);
        std::ostringstream log;
        const int rc = run_experiment(cfg, log);
        return py::make_tuple(rc, log.str());
      },
      py::arg("config_path"));
}
