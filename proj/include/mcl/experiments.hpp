#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mcl/domain.hpp"
#include "mcl/metric_tree.hpp"

namespace mcl {

/// Parsed experiment description. Loaded from a key=value config file
/// with [sections]; every field is validated against its target module.
struct ExperimentConfig {
  std::string kind;  // curse_sweep | concentration | nn_radius | vc_demo | bench
  DomainKind domain = DomainKind::hamming;
  std::vector<std::uint32_t> dims;

  std::string n_rule = "fixed";  // fixed | pow2_sqrt  (n = 2^ceil(sqrt(d)))
  std::uint64_t n = 4096;
  std::uint64_t n_max = std::uint64_t{1} << 20;

  BuildParams tree;

  std::uint64_t queries = 500;
  double replay_fraction = 0.05;
  NnSchedule schedule;

  std::uint64_t mc_samples = 100000;
  std::uint64_t vc_trials = 10000;
  std::uint64_t vc_concept_budget = 4000;

  std::uint64_t seed = 0;
  std::uint32_t threads = 1;
  std::string out_dir = "out";

  std::uint64_t rows_n(std::uint32_t d) const;
};

/// Parses the config file; throws Errc::config naming the offending
/// field. `MCL_SEED` in the environment overrides the configured seed
/// (explicit setters override both).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& origin);

/// Runs the experiment, writing metadata.json plus the experiment's CSV
/// artifacts into cfg.out_dir. Returns 0 on success, 1 if any mid-run
/// invariant (oracle replay, tree validation) fails.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Prints a human-readable summary of an artifact directory and checks
/// the built-in assertion set. Returns 0 ok, 1 assertion failure,
/// 2 missing/corrupt artifacts.
int report_dir(const std::string& dir, std::ostream& out);

}  // namespace mcl
