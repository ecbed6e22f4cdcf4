#ifndef FAIRPLAN_HARNESS_HPP
#define FAIRPLAN_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairplan/instance.hpp"
#include "fairplan/solver.hpp"

namespace fairplan {

// Deterministic uniform doubles from a 64-bit generator state; identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::uint64_t state_;
};

struct SyntheticSpec {
  int n = 10;
  int K = 5;
  double beta = -1.0;  // price sensitivity, < 0
  std::pair<double, double> revenue_range{0.0, 1.0};
  std::pair<double, double> theta_range{0.0, 0.5};
  bool quality_equals_weight = true;  // otherwise qualities ~ U(0, 1]
  double delta = 0.0;
  std::uint64_t seed = 0;
  int instance_count = 1;
};

// Visibility-outcome instances with r ~ U(revenue_range),
// theta ~ U(theta_range), w = exp(beta r + theta), q = w by default.
std::vector<Instance> gen_synthetic(const SyntheticSpec& spec);

// Items spanning the high/low quality x high/low revenue quadrants
// (round-robin), with w = q and visibility outcomes. Defaults reproduce the
// four-item, K = 2 preset. Degenerate ranges give constant vectors.
struct QuadrantRanges {
  std::pair<double, double> high_q{0.5, 1.0};
  std::pair<double, double> low_q{0.0, 0.5};
  std::pair<double, double> high_r{0.6, 1.0};
  std::pair<double, double> low_r{0.2, 0.6};
};
Instance gen_two_group_quadrants(std::uint64_t seed, double delta = 0.0,
                                 int n = 4, int K = 2,
                                 const QuadrantRanges& ranges = {});

// n items with m highly attractive ones: theta ~ U[0.4, 1] for the first m
// and U[0.2, 0.4] for the rest, r ~ U[0, 1], w = exp(beta r + theta), q = w.
Instance gen_two_group_attractive(int n, int K, int m, double beta,
                                  std::uint64_t seed, double delta = 0.0);

struct RatingsSpec {
  int min_raters = 5;
  double min_avg_rating = 3.0;
  int top_n = 20;
  double scale = 1.0 / 20;
  int K = 5;
  double delta = 0.0;
  char delimiter = '\t';
  std::string genre;          // optional filter
  std::string metadata_path;  // id<TAB>genre|genre|... lines
};

// Builds a market-share instance from (userId, itemId, rating) triples:
// per-item average ratings gamma, filtered by support and level, top_n kept,
// w = scale * gamma, q = w, r = 1, visibility outcomes.
Instance ingest_ratings(const std::string& ratings_path,
                        const RatingsSpec& spec);

// Synthetic stand-in for the ratings pipeline: top_n average ratings drawn
// uniformly from [lo, hi], then the same construction.
Instance synthetic_ratings_instance(int top_n, double lo, double hi,
                                    double scale, int K, std::uint64_t seed);

struct SweepCell {
  double delta = 0.0;
  int instance_index = 0;
  double objective = 0.0;
  double unconstrained = 0.0;
  double price_of_fairness = 0.0;  // 1 - objective / unconstrained
  int support_size = 0;            // pruned at 1e-3 for reporting
  std::vector<double> visibility;  // per item, with (a=0, b=1) weights
  std::int64_t oracle_calls = 0;
  double wall_time_sec = 0.0;
};

struct SweepAggregate {
  double delta = 0.0;
  int count = 0;
  double mean_objective = 0.0, sem_objective = 0.0;
  double mean_unconstrained = 0.0;
  double mean_pof = 0.0, sem_pof = 0.0;
  double mean_support = 0.0;
  double mean_time = 0.0;
  std::vector<double> mean_visibility;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;  // one per delta, in input order
};

SweepResult delta_sweep(const std::vector<Instance>& instances,
                        const std::vector<double>& deltas,
                        const SolverConfig& config);

// Tab-separated aggregate table with the stable header
// delta, objective, unconstrained, pof, support, time; 6 significant digits.
std::string sweep_to_tsv(const SweepResult& result, bool with_timing);

// Full-precision machine-readable form of every cell and aggregate.
std::string sweep_to_json(const SweepResult& result, bool with_timing);

// Human-readable summary (mean +/- std/sqrt(count)) from sweep_to_json text.
std::string render_sweep_report(const std::string& sweep_json);

}  // namespace fairplan

#endif  // FAIRPLAN_HARNESS_HPP
