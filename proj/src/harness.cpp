#include "bdtest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "bdtest/edge_list_io.hpp"
#include "bdtest/error.hpp"
#include "bdtest/generators.hpp"
#include "bdtest/random.hpp"

namespace bdtest {

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

NamedGraph load_graph_arg(const std::string& arg, std::uint64_t default_seed) {
  if (std::filesystem::is_regular_file(arg)) return {arg, load_edge_list(arg)};
  std::string spec = arg;
  std::uint64_t seed = default_seed;
  if (const auto at = arg.rfind('@'); at != std::string::npos) {
    spec = arg.substr(0, at);
    try {
      std::size_t used = 0;
      seed = std::stoull(arg.substr(at + 1), &used);
      if (used != arg.size() - at - 1) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw InfeasibleSpec("bad seed in '" + arg + "'");
    }
  }
  const auto parsed = parse_generator_spec(spec);
  return {to_string(parsed) + "@" + std::to_string(seed), generate(parsed, seed)};
}

namespace {

std::vector<NamedGraph> load_corpus_part(const std::filesystem::path& dir) {
  std::vector<NamedGraph> out;
  if (!std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    if (file.extension() != ".spec") {
      out.push_back({file.string(), load_edge_list(file.string())});
      continue;
    }
    std::ifstream in(file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream words(line);
      std::string spec;
      if (!(words >> spec)) continue;
      std::uint64_t seed = 0;
      if (!(words >> seed)) seed = 0;
      try {
        const auto parsed = parse_generator_spec(spec);
        out.push_back({to_string(parsed) + "@" + std::to_string(seed), generate(parsed, seed)});
      } catch (const InfeasibleSpec& e) {
        throw ParseError(line_no, file.string() + ": " + e.what());
      }
    }
  }
  return out;
}

std::vector<BoundedDegreeGraph> kuratowski() { return {pattern_from_name("K5"), pattern_from_name("K33")}; }

BoundedDegreeGraph as_degree(const BoundedDegreeGraph& g, std::size_t d) {
  if (g.observed_max_degree() > d) throw DegreeExceeded(0);
  return g.with_degree_bound(d);
}

// Fraction of `trials` runs on g whose decision equals `want`; stops early
// once `bar` is out of reach.
double decision_rate(const BoundedDegreeGraph& g, const CalibrationProfile& profile, bool want, std::size_t trials,
                     double bar, std::uint64_t seed, std::size_t jobs) {
  const auto patterns = kuratowski();
  const auto allowed_misses = static_cast<std::size_t>(std::floor((1 - bar) * static_cast<double>(trials)));
  std::size_t done = 0, hits = 0;
  const std::size_t batch = std::max<std::size_t>(jobs, 1) * 4;
  while (done < trials) {
    const std::size_t count = std::min(batch, trials - done);
    std::vector<char> ok(count, 0);
    parallel_for(count, jobs, [&](std::size_t i) {
      QueryOracle o(g);
      ok[i] = test_minor_free(o, patterns, profile, derive_seed(seed, done + i)).accept == want;
    });
    for (char x : ok) hits += x ? 1 : 0;
    done += count;
    if (done - hits > allowed_misses) break;
  }
  return static_cast<double>(hits) / static_cast<double>(done);
}

ReferenceNet thin_net(const std::vector<FrequencyVector>& vectors, const std::vector<std::string>& names,
                      std::size_t R, double delta) {
  ReferenceNet net;
  net.radius = R;
  net.delta = delta;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const bool covered = std::any_of(net.points.begin(), net.points.end(),
                                     [&](const auto& p) { return rho_distance(p, vectors[i]) <= delta / 4; });
    if (covered) continue;
    net.points.push_back(vectors[i]);
    net.provenance.push_back(names[i]);
  }
  return net;
}

}  // namespace

Corpus load_corpus_dir(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw ParseError(0, "corpus directory " + dir + " not found");
  const std::filesystem::path root(dir);
  return {load_corpus_part(root / "net"), load_corpus_part(root / "accept"), load_corpus_part(root / "reject")};
}

CalibrationProfile calibrate(const Corpus& corpus, double eps, std::size_t d, const CalibrationOptions& options,
                             std::vector<CalibrationPoint>* explored) {
  if (corpus.net.empty() || corpus.accept.empty() || corpus.reject.empty()) {
    throw CalibrationFailed("corpus needs net, accept and reject graphs");
  }
  CalibrationProfile base;
  base.eps = eps;
  base.d = d;
  base.k = options.k;
  // eps/8 is not admissible for small eps, so halve until it is.
  base.eps0 = eps / 8;
  while (!eps0_admissible(base.eps0, eps, d)) {
    base.eps0 /= 2;
    if (base.eps0 < 1e-12) throw CalibrationFailed("no admissible eps0");
  }
  std::vector<BoundedDegreeGraph> net_graphs, accept, reject;
  for (const auto& g : corpus.net) {
    net_graphs.push_back(as_degree(g.graph, d));
    base.net_corpus.push_back(g.name);
    base.certified_delta.push_back(find_partition_greedy(net_graphs.back(), options.k).delta);
  }
  for (const auto& g : corpus.accept) accept.push_back(as_degree(g.graph, d));
  for (const auto& g : corpus.reject) reject.push_back(as_degree(g.graph, d));

  struct Candidate {
    CalibrationPoint point;
    ReferenceNet net;
  };
  std::vector<Candidate> candidates;
  for (std::size_t R : options.radii) {
    std::vector<FrequencyVector> vectors;
    for (const auto& g : net_graphs) vectors.push_back(exact_frequency(g, R));
    for (double sf : options.safety_factors) {
      const double delta = hyperfinite_delta(eps, d, sf);
      auto net = thin_net(vectors, base.net_corpus, R, delta);
      for (double c : options.c_values) {
        const std::size_t s = distinguisher_samples(net.support_size(), delta, c);
        if (s == 0 || s > options.max_samples) continue;
        for (std::size_t m : options.phase2_values) {
          CalibrationPoint p{R, sf, c, s, m, s * exploration_cost(d, R) + m * exploration_cost(d, options.k), 0, 0};
          candidates.push_back({p, net});
        }
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.point.queries < b.point.queries; });

  auto profile_for = [&](const Candidate& cand, double scale) {
    CalibrationProfile p = base;
    p.safety_factor = cand.point.safety_factor;
    p.c = cand.point.c * scale;
    p.phase1_samples = static_cast<std::size_t>(std::ceil(static_cast<double>(cand.point.samples) * scale));
    p.phase2_samples = static_cast<std::size_t>(std::ceil(static_cast<double>(cand.point.m) * scale));
    p.net = cand.net;
    return p;
  };

  std::optional<CalibrationPoint> best;
  for (const auto& cand : candidates) {
    auto point = cand.point;
    const auto profile = profile_for(cand, 1.0);
    point.worst_accept = 1.0;
    point.worst_reject = 1.0;
    for (const auto& g : accept) {
      point.worst_accept = std::min(point.worst_accept,
                                    decision_rate(g, profile, true, options.trials, options.bar, options.seed, options.jobs));
      if (point.worst_accept < options.bar) break;
    }
    if (point.worst_accept >= options.bar) {
      for (const auto& g : reject) {
        point.worst_reject = std::min(
            point.worst_reject, decision_rate(g, profile, false, options.trials, options.bar, options.seed, options.jobs));
        if (point.worst_reject < options.bar) break;
      }
    } else {
      point.worst_reject = 0;
    }
    if (explored) explored->push_back(point);
    if (!best || std::min(point.worst_accept, point.worst_reject) > std::min(best->worst_accept, best->worst_reject)) {
      best = point;
    }
    if (point.worst_accept >= options.bar && point.worst_reject >= options.bar) {
      return profile_for(cand, options.margin);
    }
  }
  std::string frontier = "no candidate";
  if (best) {
    std::ostringstream os;
    os << "best R=" << best->R << " safety_factor=" << best->safety_factor << " c=" << best->c
       << " accept=" << best->worst_accept << " reject=" << best->worst_reject;
    frontier = os.str();
  }
  throw CalibrationFailed("no parameter set reached the " + std::to_string(options.bar) + " bars; " + frontier);
}

std::vector<TesterVerdict> run_tester(const BoundedDegreeGraph& g, const std::string& tester,
                                      const std::vector<BoundedDegreeGraph>& patterns,
                                      const CalibrationProfile& profile, std::size_t trials, std::uint64_t seed,
                                      std::size_t jobs, bool majority) {
  if (tester != "planarity" && tester != "minor" && tester != "hyperfinite") {
    throw Error("unknown tester '" + tester + "'");
  }
  const auto input = as_degree(g, profile.d);
  auto once = [&](std::uint64_t s) {
    QueryOracle o(input);
    if (tester == "planarity") return test_planarity(o, profile, s);
    if (tester == "minor") return test_minor_free(o, patterns, profile, s);
    return test_hyperfinite(o, profile, s);
  };
  std::vector<TesterVerdict> out(trials);
  parallel_for(trials, jobs, [&](std::size_t i) {
    const auto s = derive_seed(seed, i);
    out[i] = majority ? majority_of_three(once, s) : once(s);
  });
  return out;
}

namespace {

double density(std::size_t edges, std::size_t n) { return static_cast<double>(edges) / static_cast<double>(n); }

}  // namespace

CutExperiment cut_experiment(const BoundedDegreeGraph& g, std::size_t k, std::optional<double> eps,
                             std::size_t trials, std::uint64_t seed, std::size_t max_R, std::size_t jobs) {
  CutExperiment ex;
  ex.source = find_partition_greedy(g, k, seed);
  ex.eps = eps.value_or(ex.source.delta);
  if (!(ex.eps > 0)) ex.eps = 1.0 / static_cast<double>(std::max<std::size_t>(g.num_vertices(), 1));
  ex.choice = choose_R(g, ex.source, ex.eps, max_R);
  const std::size_t d = g.max_degree();
  LocalCutSampler sampler(g, ex.choice.table, ex.eps, d);
  ex.trials.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t i) { ex.trials[i] = sampler.sample(derive_seed(seed, i)); });
  double total = 0;
  for (const auto& t : ex.trials) total += static_cast<double>(t.edges.size());
  ex.mean = trials ? total / static_cast<double>(trials) : 0.0;
  const double delta = ex.source.delta;
  const double n = static_cast<double>(g.num_vertices());
  ex.bound = delta > 0 ? 4 * delta * std::log(3 * static_cast<double>(d) / delta) * n : 0.0;
  return ex;
}

TransferExperiment transfer_experiment(const BoundedDegreeGraph& source, const BoundedDegreeGraph& target,
                                       std::size_t k, std::optional<double> eps, std::size_t trials,
                                       std::uint64_t seed, std::size_t max_R, std::size_t jobs) {
  TransferExperiment ex;
  ex.source = find_partition_greedy(source, k, seed);
  ex.eps = eps.value_or(ex.source.delta);
  if (!(ex.eps > 0)) ex.eps = 1.0 / static_cast<double>(std::max<std::size_t>(source.num_vertices(), 1));
  ex.choice = choose_R(source, ex.source, ex.eps, max_R, TableMode::complete);
  ex.r = ex.choice.R + k + 1;
  ex.rho = rho_distance(exact_frequency(source, ex.r), exact_frequency(target, ex.r));
  const std::size_t d = source.max_degree();
  LocalCutSampler on_source(source, ex.choice.table, ex.eps, d);
  if (!ex.choice.table.complete) throw Error("transfer needs a complete table");
  LocalCutSampler on_target(target, ex.choice.table, ex.eps, d);
  ex.source_sizes.resize(trials);
  ex.target_sizes.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t i) {
    const auto s = derive_seed(seed, i);
    ex.source_sizes[i] = on_source.sample(s).edges.size();
    ex.target_sizes[i] = on_target.sample(s).edges.size();
  });
  auto stats = [&](const std::vector<std::size_t>& sizes, std::size_t n, double& mean, double& var) {
    double sum = 0, sq = 0;
    for (auto x : sizes) {
      const double y = density(x, n);
      sum += y;
      sq += y * y;
    }
    const double t = static_cast<double>(std::max<std::size_t>(sizes.size(), 1));
    mean = sum / t;
    var = std::max(0.0, sq / t - mean * mean);
  };
  double var_s = 0, var_t = 0;
  stats(ex.source_sizes, source.num_vertices(), ex.source_mean_density, var_s);
  stats(ex.target_sizes, target.num_vertices(), ex.target_mean_density, var_t);
  const double t = static_cast<double>(std::max<std::size_t>(trials, 1));
  ex.allowance = static_cast<double>(d) * ex.rho + 3 * std::sqrt(var_s / t + var_t / t);
  return ex;
}

}  // namespace bdtest
