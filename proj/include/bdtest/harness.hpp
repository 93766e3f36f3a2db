#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdtest/graph.hpp"
#include "bdtest/hyperfinite.hpp"
#include "bdtest/testers.hpp"

namespace bdtest {

// Runs f(0..n-1) on up to `jobs` threads. f must write only to its own slot.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f);

// Wilson score interval for successes / trials (z = 1.96 gives 95%).
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

// A graph argument is an edge-list path if such a file exists, otherwise a
// generator spec with an optional "@seed" suffix, e.g. "grid(50,50)" or
// "tree(2000,4)@7".
struct NamedGraph {
  std::string name;
  BoundedDegreeGraph graph;
};
NamedGraph load_graph_arg(const std::string& arg, std::uint64_t default_seed = 0);

// Directory with net/, accept/ and reject/ subdirectories. Files ending in
// .spec hold one "spec [seed]" per line; other files are edge lists.
struct Corpus {
  std::vector<NamedGraph> net, accept, reject;
};
Corpus load_corpus_dir(const std::string& dir);

struct CalibrationOptions {
  std::vector<std::size_t> radii{1, 2};
  std::vector<double> safety_factors{2, 4, 8, 12, 16, 24};
  std::vector<double> c_values{0.05, 0.1, 0.25, 0.5, 1.0};
  std::vector<std::size_t> phase2_values{2, 4, 8};
  std::size_t k = 4;
  std::size_t trials = 20;
  double bar = 0.8;
  double margin = 2.0;
  std::size_t max_samples = 20000;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct CalibrationPoint {
  std::size_t R = 0;
  double safety_factor = 0, c = 0;
  std::size_t samples = 0, m = 0;
  std::uint64_t queries = 0;
  double worst_accept = 0, worst_reject = 0;
};

// Cheapest parameter set (by queries per run) whose accept rate on every
// accept graph and reject rate on every reject graph reach `bar`; samples
// are then multiplied by `margin`. Throws CalibrationFailed with the best
// frontier point otherwise.
CalibrationProfile calibrate(const Corpus& corpus, double eps, std::size_t d, const CalibrationOptions& options,
                             std::vector<CalibrationPoint>* explored = nullptr);

// One verdict per trial; tester is "planarity", "minor" or "hyperfinite".
std::vector<TesterVerdict> run_tester(const BoundedDegreeGraph& g, const std::string& tester,
                                      const std::vector<BoundedDegreeGraph>& patterns,
                                      const CalibrationProfile& profile, std::size_t trials, std::uint64_t seed,
                                      std::size_t jobs, bool majority = false);

struct CutExperiment {
  PartitionCut source;
  RChoice choice;
  double eps = 0;
  std::vector<LocalCut> trials;
  double mean = 0;
  double bound = 0;  // 4 delta_S ln(3 d / delta_S) n
  bool within_bound() const { return mean <= bound; }
};

// greedy S -> choose_R -> table -> sample_local_cut, per-trial seeds derived
// from `seed`. eps defaults to the source cut density.
CutExperiment cut_experiment(const BoundedDegreeGraph& g, std::size_t k, std::optional<double> eps,
                             std::size_t trials, std::uint64_t seed, std::size_t max_R = 12, std::size_t jobs = 1);

struct TransferExperiment {
  PartitionCut source;
  RChoice choice;
  double eps = 0;
  std::size_t r = 0;  // R + k + 1
  double rho = 0;     // rho_r(source, target)
  std::vector<std::size_t> source_sizes, target_sizes;
  double source_mean_density = 0, target_mean_density = 0;
  double allowance = 0;  // d * rho + 3 standard errors
  bool within() const { return std::abs(source_mean_density - target_mean_density) <= allowance; }
};

TransferExperiment transfer_experiment(const BoundedDegreeGraph& source, const BoundedDegreeGraph& target,
                                       std::size_t k, std::optional<double> eps, std::size_t trials,
                                       std::uint64_t seed, std::size_t max_R = 12, std::size_t jobs = 1);

}  // namespace bdtest
