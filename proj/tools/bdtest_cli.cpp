// Command-line front end. Exit codes: 0 ok, 1 other failure, 2 a checked
// bound failed, 3 bad input.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdtest/edge_list_io.hpp"
#include "bdtest/error.hpp"
#include "bdtest/generators.hpp"
#include "bdtest/harness.hpp"
#include "bdtest/hyperfinite.hpp"
#include "bdtest/minor.hpp"
#include "bdtest/neighborhood.hpp"
#include "bdtest/random.hpp"
#include "bdtest/testers.hpp"
#include "json.hpp"

namespace {

using namespace bdtest;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kBoundViolation = 2;
constexpr int kInputError = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out;
  std::string config;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Main output goes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError(0, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  // Human-readable summary: stdout when the main output is a file, stderr otherwise.
  std::ostream& summary() { return file_.is_open() ? std::cout : std::cerr; }

 private:
  std::ofstream file_;
};

std::vector<BoundedDegreeGraph> parse_patterns(const std::string& list) {
  std::vector<BoundedDegreeGraph> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) out.push_back(pattern_from_name(name));
  }
  if (out.empty()) throw ParseError(0, "no patterns given");
  return out;
}

// --config: a JSON object whose keys are long option names. Values fill in
// options missing from the command line.
std::vector<std::string> config_arguments(const std::vector<std::string>& argv) {
  std::string path;
  for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
    if (argv[i] == "--config") path = argv[i + 1];
  }
  for (const auto& a : argv) {
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "config must be a JSON object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : argv) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
    if (present) continue;
    auto scalar = [](const nlohmann::json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(v));
      }
    } else if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(value));
    }
  }
  return extra;
}

int cmd_generate(const Globals& g, const std::string& spec) {
  const auto graph = load_graph_arg(spec, g.seed).graph;
  Output out(g.out);
  write_edge_list(graph, out.stream());
  out.summary() << "n " << graph.num_vertices() << "\nedges " << graph.num_edges() << "\nmax_degree "
                << graph.observed_max_degree() << "\n";
  return kOk;
}

int cmd_stats(const Globals& g, const std::string& file, std::size_t r) {
  const auto graph = load_graph_arg(file, g.seed).graph;
  const auto f = exact_frequency(graph, r);
  std::cout << "radius " << r << "\nvertices " << graph.num_vertices() << "\nsupport " << f.support_size()
            << "\nentropy " << num(entropy(f)) << "\n";
  std::cout << "type,frequency\n";
  for (const auto& [code, p] : f.entries) std::cout << to_hex(code) << "," << num(p) << "\n";
  if (!g.out.empty()) {
    Output out(g.out);
    out.stream() << to_json(f).dump(2) << "\n";
  }
  return kOk;
}

int cmd_rho(const Globals& g, const std::string& a, const std::string& b, std::size_t r) {
  const auto fa = exact_frequency(load_graph_arg(a, g.seed).graph, r);
  const auto fb = exact_frequency(load_graph_arg(b, g.seed).graph, r);
  Output out(g.out);
  out.stream() << "rho " << num(rho_distance(fa, fb)) << "\n";
  out.stream() << "type,a,b,contribution\n";
  for (const auto& [code, diff] : rho_breakdown(fa, fb)) {
    out.stream() << to_hex(code) << "," << num(fa.frequency(code)) << "," << num(fb.frequency(code))
                 << "," << num(diff) << "\n";
  }
  return kOk;
}

int cmd_partition(const Globals& g, const std::string& file, std::size_t k, const std::string& mode,
                  std::size_t restarts, std::size_t max_vertices) {
  const auto graph = load_graph_arg(file, g.seed).graph;
  PartitionCut cut;
  if (mode == "exact") {
    cut = find_partition_exact(graph, k, max_vertices);
  } else if (mode == "greedy") {
    cut = find_partition_greedy(graph, k, g.seed, restarts);
  } else {
    throw ParseError(0, "mode must be exact or greedy");
  }
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& c : cut.components) ++histogram[c.size()];
  std::cout << "cut_size " << cut.cut_edges.size() << "\ndelta " << num(cut.delta) << "\ncomponents "
            << cut.components.size() << "\nsize,count\n";
  for (const auto& [size, count] : histogram) std::cout << size << "," << count << "\n";
  if (!g.out.empty()) {
    Output out(g.out);
    write_edge_list(BoundedDegreeGraph(graph.num_vertices(), graph.max_degree(), cut.cut_edges), out.stream());
  }
  return kOk;
}

int cmd_cut_experiment(const Globals& g, const std::string& file, std::size_t k, std::optional<double> eps,
                       std::size_t trials, std::size_t max_R) {
  const auto graph = load_graph_arg(file, g.seed).graph;
  const auto ex = cut_experiment(graph, k, eps, trials, g.seed, max_R, g.jobs);
  Output out(g.out);
  out.stream() << "trial,seed,cut_size,boundary_edges,leftover_edges,uncovered,selected,max_component\n";
  for (std::size_t i = 0; i < ex.trials.size(); ++i) {
    const auto& t = ex.trials[i];
    out.stream() << i << "," << derive_seed(g.seed, i) << "," << t.edges.size() << "," << t.boundary_edges << ","
                 << t.leftover_edges << "," << t.uncovered << "," << t.selected << "," << t.max_component << "\n";
  }
  auto& s = out.summary();
  s << "source_cut " << ex.source.cut_edges.size() << "\ndelta_S " << num(ex.source.delta) << "\neps "
    << num(ex.eps) << "\nR " << ex.choice.R << "\nlow_count " << ex.choice.profile.low_count << "\ntable_rows "
    << ex.choice.table.rows.size() << "\ntrials " << trials << "\nmean " << num(ex.mean) << "\nbound "
    << num(ex.bound) << "\nwithin_bound " << (ex.within_bound() ? "yes" : "no") << "\n";
  return ex.within_bound() ? kOk : kBoundViolation;
}

int cmd_transfer_experiment(const Globals& g, const std::string& source, const std::string& target, std::size_t k,
                            std::optional<double> eps, std::size_t trials, std::size_t max_R) {
  const auto a = load_graph_arg(source, g.seed).graph;
  const auto b = load_graph_arg(target, g.seed).graph;
  const auto ex = transfer_experiment(a, b, k, eps, trials, g.seed, max_R, g.jobs);
  Output out(g.out);
  out.stream() << "trial,seed,source_cut,target_cut\n";
  for (std::size_t i = 0; i < trials; ++i) {
    out.stream() << i << "," << derive_seed(g.seed, i) << "," << ex.source_sizes[i] << "," << ex.target_sizes[i]
                 << "\n";
  }
  auto& s = out.summary();
  s << "R " << ex.choice.R << "\nr " << ex.r << "\nrho_r " << num(ex.rho) << "\nsource_mean_density "
    << num(ex.source_mean_density) << "\ntarget_mean_density " << num(ex.target_mean_density) << "\ndifference "
    << num(std::abs(ex.source_mean_density - ex.target_mean_density)) << "\nallowance " << num(ex.allowance)
    << "\nwithin " << (ex.within() ? "yes" : "no") << "\n";
  return ex.within() ? kOk : kBoundViolation;
}

int cmd_calibrate(const Globals& g, const std::string& dir, const std::vector<double>& eps_list, std::size_t d,
                  std::size_t k, std::size_t trials) {
  const auto corpus = load_corpus_dir(dir);
  if (eps_list.empty()) throw ParseError(0, "no eps given");
  CalibrationOptions options;
  options.k = k;
  options.trials = trials;
  options.seed = g.seed;
  options.jobs = g.jobs;
  for (double eps : eps_list) {
    std::vector<CalibrationPoint> explored;
    const auto profile = calibrate(corpus, eps, d, options, &explored);
    std::string path = g.out;
    if (eps_list.size() > 1 && !path.empty()) {
      std::filesystem::create_directories(path);
      path = (std::filesystem::path(path) / ("profile_eps" + num(eps) + ".json")).string();
    }
    Output out(path);
    out.stream() << to_json(profile).dump(2) << "\n";
    auto& s = out.summary();
    s << "eps " << num(eps) << " R " << profile.net.radius << " safety_factor " << num(profile.safety_factor)
      << " phase1_samples " << profile.phase1_samples << " phase2_samples " << profile.phase2_samples
      << " net_points " << profile.net.points.size() << " candidates_tried " << explored.size() << "\n";
  }
  return kOk;
}

int cmd_test(const Globals& g, const std::string& input, const std::string& tester, const std::string& profile_path,
             std::size_t trials, const std::string& patterns, bool majority) {
  const auto graph = load_graph_arg(input, g.seed);
  const auto profile = load_profile(profile_path);
  std::vector<BoundedDegreeGraph> pats;
  if (tester == "minor") pats = parse_patterns(patterns);
  const auto verdicts = run_tester(graph.graph, tester, pats, profile, trials, g.seed, g.jobs, majority);
  Output out(g.out);
  out.stream() << "trial,seed,decision,phase,queries_used,distance,nearest,witness\n";
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    accepted += v.accept ? 1 : 0;
    out.stream() << i << "," << derive_seed(g.seed, i) << "," << (v.accept ? "accept" : "reject") << "," << v.phase
                 << "," << v.queries_used << "," << (v.distance ? num(*v.distance) : "") << ","
                 << v.nearest.value_or("") << "," << (v.witness ? std::to_string(*v.witness) : "") << "\n";
  }
  const auto [lo, hi] = wilson_interval(accepted, trials);
  out.summary() << "graph " << graph.name << "\ntrials " << trials << "\naccepted " << accepted << "\naccept_rate "
                << num(trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0)
                << "\nwilson95 " << num(lo) << " " << num(hi) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property testing of bounded-degree graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file");
  app.add_option("--config", g.config, "JSON file of option defaults");

  std::string spec, file, file_b, mode = "greedy", tester = "planarity", profile, patterns = "K5,K33", corpus;
  std::size_t radius = 1, k = 4, trials = 100, restarts = 0, max_vertices = 16, max_R = 12, d = 4;
  std::optional<double> eps;
  std::vector<double> eps_list;

  auto* gen = app.add_subcommand("generate", "Write a generated graph as an edge list");
  gen->add_option("spec", spec, "Generator spec, e.g. grid(10,10)")->required();

  auto* stats = app.add_subcommand("stats", "Exact ball-type frequencies");
  stats->add_option("graph", file, "Edge-list file or generator spec")->required();
  stats->add_option("--radius,-r", radius);

  auto* rho = app.add_subcommand("rho", "Exact rho_r between two graphs");
  rho->add_option("a", file)->required();
  rho->add_option("b", file_b)->required();
  rho->add_option("--radius,-r", radius);

  auto* part = app.add_subcommand("partition", "Small-component edge cut");
  part->add_option("graph", file)->required();
  part->add_option("--k", k)->required();
  part->add_option("--mode", mode)->check(CLI::IsMember({"exact", "greedy"}));
  part->add_option("--restarts", restarts);
  part->add_option("--max-vertices", max_vertices);

  auto* cut = app.add_subcommand("cut-experiment", "Randomized local cut trials");
  cut->add_option("graph", file)->required();
  cut->add_option("--k", k)->required();
  cut->add_option("--eps", eps, "Defaults to the source cut density");
  cut->add_option("--trials", trials);
  cut->add_option("--max-R", max_R);

  auto* transfer = app.add_subcommand("transfer-experiment", "Local cut transferred to a second graph");
  transfer->add_option("source", file)->required();
  transfer->add_option("target", file_b)->required();
  transfer->add_option("--k", k)->required();
  transfer->add_option("--eps", eps);
  transfer->add_option("--trials", trials);
  transfer->add_option("--max-R", max_R);

  auto* cal = app.add_subcommand("calibrate", "Fit tester parameters on a corpus");
  cal->add_option("corpus", corpus, "Directory with net/, accept/, reject/")->required();
  cal->add_option("--eps", eps_list)->required();
  cal->add_option("--d", d);
  cal->add_option("--k", k);
  cal->add_option("--trials", trials);

  auto* test = app.add_subcommand("test", "Run a tester repeatedly");
  test->add_option("graph", file)->required();
  test->add_option("--tester", tester)->check(CLI::IsMember({"planarity", "minor", "hyperfinite"}));
  test->add_option("--profile", profile)->required();
  test->add_option("--trials", trials);
  test->add_option("--patterns", patterns, "Comma-separated, for --tester minor");
  bool majority = false;
  test->add_flag("--majority", majority, "Majority of three runs per trial");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (auto& extra : config_arguments(args)) args.push_back(extra);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*gen) return cmd_generate(g, spec);
    if (*stats) return cmd_stats(g, file, radius);
    if (*rho) return cmd_rho(g, file, file_b, radius);
    if (*part) return cmd_partition(g, file, k, mode, restarts, max_vertices);
    if (*cut) return cmd_cut_experiment(g, file, k, eps, trials, max_R);
    if (*transfer) return cmd_transfer_experiment(g, file, file_b, k, eps, trials, max_R);
    if (*cal) return cmd_calibrate(g, corpus, eps_list, d, k, trials);
    if (*test) return cmd_test(g, file, tester, profile, trials, patterns, majority);
  } catch (const NoAdmissibleR& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBoundViolation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InfeasibleSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DegreeExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidEdge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const SearchBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
