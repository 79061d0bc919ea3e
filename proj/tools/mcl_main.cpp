// mcl: metric-tree similarity search and concentration-of-measure
// experiment harness.
//
// Exit codes: 0 success, 1 assertion/validation failure, 2 usage or
// config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcl/dataset_io.hpp"
#include "mcl/experiments.hpp"
#include "mcl/metric_tree.hpp"
#include "mcl/parallel.hpp"
#include "mcl/version.hpp"

namespace {

using nlohmann::ordered_json;

mcl::Dataset load_or_die(const std::string& path) { return mcl::load_dataset(path); }

ordered_json trace_json(const mcl::SearchTrace& t) {
  ordered_json j;
  j["internal_nodes_visited"] = t.internal_nodes_visited;
  j["decision_evals"] = t.decision_evals;
  j["bins_opened"] = t.bins_opened;
  j["distance_computations"] = t.distance_computations;
  j["result_size"] = t.result_size;
  j["cost"] = t.cost();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric-tree exact similarity search laboratory"};
  app.set_version_flag("--version", mcl::kVersion);
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "sample an i.i.d. dataset and write it to a file");
  std::string gen_kind = "hamming", gen_out = "data.mcl";
  std::uint32_t gen_d = 64;
  std::uint64_t gen_n = 1024, gen_seed = 0;
  bool gen_binary = false;
  gen->add_option("--kind", gen_kind, "hamming|unit-cube|gaussian|sphere");
  gen->add_option("--d", gen_d, "dimension")->required();
  gen->add_option("--n", gen_n, "number of points")->required();
  gen->add_option("--seed", gen_seed, "sampling seed");
  gen->add_option("--out", gen_out, "output path");
  gen->add_flag("--binary", gen_binary, "write the MCL1 binary format");

  // build
  auto* build = app.add_subcommand("build", "build a metric tree over a dataset");
  std::string build_data, build_out = "tree.mct", build_strategy = "vp";
  std::uint32_t build_b = 16, build_c = 8, build_h = 64;
  std::uint64_t build_seed = 0;
  build->add_option("--data", build_data, "dataset file")->required();
  build->add_option("--strategy", build_strategy, "vp|ball|pivot");
  build->add_option("--b", build_b, "leaf bin capacity");
  build->add_option("--c", build_c, "candidate sample size per node");
  build->add_option("--depth", build_h, "maximum depth h");
  build->add_option("--seed", build_seed, "build seed");
  build->add_option("--out", build_out, "output tree path");

  // query
  auto* query = app.add_subcommand("query", "run a range or NN query against a tree");
  std::string query_tree, query_data, query_center;
  std::int64_t query_center_index = -1;
  double query_eps = 0.0, query_r0 = 0.05, query_growth = 2.0;
  bool query_nn = false;
  query->add_option("--tree", query_tree, "tree file")->required();
  query->add_option("--data", query_data, "dataset file the tree was built on")->required();
  query->add_option("--center", query_center,
                    "query center: bit string (hamming) or comma-separated reals");
  query->add_option("--center-index", query_center_index, "use datapoint i as the center");
  query->add_option("--eps", query_eps, "range query radius (> 0)");
  query->add_flag("--nn", query_nn, "nearest-neighbour query instead of a range query");
  query->add_option("--r0", query_r0, "NN schedule initial radius");
  query->add_option("--growth", query_growth, "NN schedule growth factor (> 1)");

  // validate
  auto* validate = app.add_subcommand("validate", "check tree invariants against its dataset");
  std::string val_tree, val_data;
  validate->add_option("--tree", val_tree, "tree file")->required();
  validate->add_option("--data", val_data, "dataset file")->required();

  // run
  auto* run = app.add_subcommand("run", "run a config-driven experiment");
  std::string run_config, run_out;
  std::int64_t run_seed = -1;
  std::uint32_t run_threads = 0;
  run->add_option("config", run_config, "experiment config file")->required();
  run->add_option("--out", run_out, "override output directory");
  run->add_option("--seed", run_seed, "override seed (beats MCL_SEED and the config)");
  run->add_option("--threads", run_threads, "override worker thread count");

  // report
  auto* report = app.add_subcommand("report", "summarize an artifact directory");
  std::string report_dir_arg;
  report->add_option("dir", report_dir_arg, "artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      const mcl::DomainSpec spec =
          mcl::make_domain(mcl::domain_kind_from_string(gen_kind), gen_d);
      mcl::Dataset ds{spec, gen_seed, mcl::sample_points(spec, gen_seed, gen_n)};
      mcl::save_dataset(gen_out, ds, gen_binary);
      std::cout << "wrote " << gen_n << " points to " << gen_out << "\n";
      return 0;
    }

    if (*build) {
      const mcl::Dataset ds = load_or_die(build_data);
      mcl::BuildParams params;
      params.strategy = mcl::strategy_from_string(build_strategy);
      params.bin_capacity = build_b;
      params.candidates = build_c;
      params.max_depth = build_h;
      const mcl::MetricTree tree = mcl::build_tree(ds.points, ds.spec, params, build_seed);
      const mcl::ValidationReport rep = mcl::validate_tree(tree, ds.points);
      if (!rep.ok) {
        std::cerr << "built tree failed validation: " << rep.violations.front().what << "\n";
        return 1;
      }
      mcl::save_tree(build_out, tree);
      std::cout << "tree with " << tree.nodes.size() << " nodes (" << tree.leaf_count()
                << " leaves, depth " << tree.depth() << ") -> " << build_out << "\n";
      return 0;
    }

    if (*query) {
      const mcl::Dataset ds = load_or_die(query_data);
      const mcl::MetricTree tree = mcl::load_tree(query_tree);
      if (tree.dataset_hash != mcl::dataset_fingerprint(ds))
        throw mcl::Error(mcl::Errc::data_mismatch,
                         "tree was built over a different dataset (fingerprint mismatch)");
      mcl::Point center;
      if (query_center_index >= 0) {
        if (static_cast<std::uint64_t>(query_center_index) >= ds.points.size())
          throw mcl::Error(mcl::Errc::invalid_argument, "--center-index out of range");
        center = ds.points[static_cast<std::size_t>(query_center_index)];
      } else if (!query_center.empty()) {
        if (ds.spec.kind == mcl::DomainKind::hamming) {
          center = mcl::point_from_bit_string(query_center);
        } else {
          std::vector<double> coords;
          std::stringstream ss(query_center);
          std::string tok;
          while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
          center = mcl::point_from_reals(std::move(coords));
        }
      } else {
        throw mcl::Error(mcl::Errc::invalid_argument,
                         "query needs --center or --center-index");
      }

      ordered_json out;
      if (query_nn) {
        const mcl::NnResult nn =
            mcl::nn_search(tree, ds.points, center, {query_r0, query_growth});
        out["nn_index"] = nn.index;
        out["nn_distance"] = nn.distance;
        out["rounds"] = nn.rounds;
        out["certificate_bins_opened"] = nn.certificate_bins_opened;
        out["trace"] = trace_json(nn.trace);
      } else {
        if (!(query_eps > 0.0))
          throw mcl::Error(mcl::Errc::invalid_argument, "range query needs --eps > 0");
        const mcl::RangeResult r = mcl::range_search(tree, ds.points, {center, query_eps});
        out["matches"] = r.matches;
        out["trace"] = trace_json(r.trace);
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*validate) {
      const mcl::Dataset ds = load_or_die(val_data);
      const mcl::MetricTree tree = mcl::load_tree(val_tree);
      const mcl::ValidationReport rep = mcl::validate_tree(tree, ds.points);
      for (const auto& v : rep.violations)
        std::cout << "violation at node " << v.node << ": " << v.what << "\n";
      std::cout << (rep.ok ? "ok" : "INVALID") << "\n";
      return rep.ok ? 0 : 1;
    }

    if (*run) {
      mcl::ExperimentConfig cfg = mcl::load_config(run_config);
      if (!run_out.empty()) cfg.out_dir = run_out;
      if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
      if (run_threads > 0) cfg.threads = run_threads;
      return mcl::run_experiment(cfg, std::cout);
    }

    if (*report) return mcl::report_dir(report_dir_arg, std::cout);
  } catch (const mcl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mcl::Errc::config || e.code() == mcl::Errc::invalid_argument ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
