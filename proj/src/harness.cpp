#include "fairplan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairplan/errors.hpp"
#include "fairplan/io.hpp"

namespace fairplan {

using nlohmann::ordered_json;

std::uint64_t Rng::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next_u64() %
                               static_cast<std::uint64_t>(hi - lo + 1));
}

std::vector<Instance> gen_synthetic(const SyntheticSpec& spec) {
  if (spec.instance_count < 1) throw InputError("instanceCount must be >= 1");
  if (spec.revenue_range.first > spec.revenue_range.second ||
      spec.theta_range.first > spec.theta_range.second)
    throw InputError("generator ranges must be valid intervals");
  Rng rng(spec.seed);
  std::vector<Instance> out;
  for (int k = 0; k < spec.instance_count; ++k) {
    Instance inst;
    inst.n = spec.n;
    inst.K = spec.K;
    inst.delta = spec.delta;
    inst.a.assign(spec.n, 0.0);
    inst.b.assign(spec.n, 1.0);
    for (int i = 0; i < spec.n; ++i) {
      const double r =
          rng.uniform(spec.revenue_range.first, spec.revenue_range.second);
      const double theta =
          rng.uniform(spec.theta_range.first, spec.theta_range.second);
      const double w = std::exp(spec.beta * r + theta);
      inst.r.push_back(std::max(r, 1e-12));  // revenues stay positive
      inst.w.push_back(w);
      inst.q.push_back(spec.quality_equals_weight ? w
                                                  : 1e-12 + rng.uniform());
    }
    inst.ids.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) inst.ids[i] = i + 1;
    inst.validate();
    out.push_back(std::move(inst));
  }
  return out;
}

Instance gen_two_group_quadrants(std::uint64_t seed, double delta, int n,
                                 int K, const QuadrantRanges& ranges) {
  Rng rng(seed);
  Instance inst;
  inst.n = n;
  inst.K = K;
  inst.delta = delta;
  inst.a.assign(n, 0.0);
  inst.b.assign(n, 1.0);
  // Quadrants cycle (hi q, hi r), (hi q, lo r), (lo q, hi r), (lo q, lo r).
  for (int i = 0; i < n; ++i) {
    const bool high_q = i % 4 < 2;
    const bool high_r = i % 2 == 0;
    const auto& qr = high_q ? ranges.high_q : ranges.low_q;
    const auto& rr = high_r ? ranges.high_r : ranges.low_r;
    inst.q.push_back(std::max(rng.uniform(qr.first, qr.second), 1e-9));
    inst.r.push_back(std::max(rng.uniform(rr.first, rr.second), 1e-9));
  }
  inst.w = inst.q;  // popularity tracks quality in this preset
  inst.ids.resize(n);
  for (int i = 0; i < n; ++i) inst.ids[i] = i + 1;
  inst.validate();
  return inst;
}

Instance gen_two_group_attractive(int n, int K, int m, double beta,
                                  std::uint64_t seed, double delta) {
  if (m < 1 || m > n) throw InputError("attractive-item count out of range");
  Rng rng(seed);
  Instance inst;
  inst.n = n;
  inst.K = K;
  inst.delta = delta;
  inst.a.assign(n, 0.0);
  inst.b.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    const double r = std::max(rng.uniform(), 1e-12);
    const double theta =
        i < m ? rng.uniform(0.4, 1.0) : rng.uniform(0.2, 0.4);
    const double w = std::exp(beta * r + theta);
    inst.r.push_back(r);
    inst.w.push_back(w);
    inst.q.push_back(w);
  }
  inst.ids.resize(n);
  for (int i = 0; i < n; ++i) inst.ids[i] = i + 1;
  inst.validate();
  return inst;
}

namespace {

Instance instance_from_ratings(std::vector<std::pair<std::int64_t, double>>
                                   rated,  // (id, avg rating), filtered
                               double scale, int K, double delta) {
  // Highest average rating first; ids break ties for determinism.
  std::sort(rated.begin(), rated.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  Instance inst;
  inst.n = static_cast<int>(rated.size());
  inst.K = K;
  inst.delta = delta;
  inst.a.assign(inst.n, 0.0);
  inst.b.assign(inst.n, 1.0);
  inst.r.assign(inst.n, 1.0);  // market-share objective
  for (const auto& [id, gamma] : rated) {
    inst.ids.push_back(id);
    inst.w.push_back(scale * gamma);
    inst.q.push_back(scale * gamma);
  }
  if (inst.n < K)
    throw InputError("only " + std::to_string(inst.n) +
                     " items survive filtering, need at least K = " +
                     std::to_string(K));
  inst.validate();
  return inst;
}

}  // namespace

Instance ingest_ratings(const std::string& ratings_path,
                        const RatingsSpec& spec) {
  if (!(spec.scale > 0.0)) throw InputError("scale must be > 0");
  if (spec.top_n < spec.K) throw InputError("topN must be >= K");

  std::set<std::int64_t> genre_keep;
  const bool use_genre = !spec.genre.empty() && !spec.metadata_path.empty();
  if (use_genre) {
    std::ifstream meta(spec.metadata_path);
    if (!meta) throw InputError("cannot open metadata: " + spec.metadata_path);
    std::string line;
    while (std::getline(meta, line)) {
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      const std::int64_t id = std::strtoll(line.c_str(), nullptr, 10);
      std::stringstream genres(line.substr(tab + 1));
      std::string g;
      while (std::getline(genres, g, '|'))
        if (g == spec.genre) genre_keep.insert(id);
    }
  }

  std::ifstream in(ratings_path);
  if (!in) throw InputError("cannot open ratings file: " + ratings_path);
  std::map<std::int64_t, std::pair<std::int64_t, double>> tally;  // count, sum
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), spec.delimiter, ' ');
    std::istringstream row(line);
    std::int64_t user = 0, item = 0;
    double rating = 0.0;
    if (!(row >> user >> item >> rating))
      throw InputError("malformed ratings row at line " +
                       std::to_string(line_no) + ": expected user item rating");
    auto& [count, sum] = tally[item];
    ++count;
    sum += rating;
  }

  std::vector<std::pair<std::int64_t, double>> rated;
  for (const auto& [id, cs] : tally) {
    if (use_genre && !genre_keep.count(id)) continue;
    if (cs.first < spec.min_raters) continue;
    const double gamma = cs.second / cs.first;
    if (gamma < spec.min_avg_rating) continue;
    rated.push_back({id, gamma});
  }
  std::sort(rated.begin(), rated.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (static_cast<int>(rated.size()) > spec.top_n) rated.resize(spec.top_n);
  return instance_from_ratings(std::move(rated), spec.scale, spec.K,
                               spec.delta);
}

Instance synthetic_ratings_instance(int top_n, double lo, double hi,
                                    double scale, int K, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<std::int64_t, double>> rated;
  for (int i = 0; i < top_n; ++i)
    rated.push_back({i + 1, rng.uniform(lo, hi)});
  return instance_from_ratings(std::move(rated), scale, K, 0.0);
}

SweepResult delta_sweep(const std::vector<Instance>& instances,
                        const std::vector<double>& deltas,
                        const SolverConfig& config) {
  if (instances.empty() || deltas.empty())
    throw InputError("delta_sweep needs instances and delta values");
  SweepResult result;
  const int n = instances.front().n;

  std::vector<double> unconstrained(instances.size());
  for (size_t k = 0; k < instances.size(); ++k)
    unconstrained[k] = unconstrained_optimum(instances[k]);

  for (double delta : deltas) {
    SweepAggregate agg;
    agg.delta = delta;
    agg.mean_visibility.assign(n, 0.0);
    std::vector<double> objectives, pofs;
    for (size_t k = 0; k < instances.size(); ++k) {
      Instance inst = instances[k];
      inst.delta = delta;
      const SolveReport report = solve(inst, config);

      SweepCell cell;
      cell.delta = delta;
      cell.instance_index = static_cast<int>(k);
      cell.objective = report.objective;
      cell.unconstrained = unconstrained[k];
      cell.price_of_fairness =
          unconstrained[k] > 0.0 ? 1.0 - report.objective / unconstrained[k]
                                 : 0.0;
      cell.support_size = pruned_support_size(report.solution);
      cell.oracle_calls = report.oracle_calls;
      cell.wall_time_sec = report.wall_time_sec;
      cell.visibility.assign(inst.n, 0.0);
      for (const auto& [s, p] : report.solution.support)
        for (int i : s) cell.visibility[i] += p;

      objectives.push_back(cell.objective);
      pofs.push_back(cell.price_of_fairness);
      agg.mean_unconstrained += cell.unconstrained;
      agg.mean_support += cell.support_size;
      agg.mean_time += cell.wall_time_sec;
      if (inst.n == n)
        for (int i = 0; i < n; ++i) agg.mean_visibility[i] += cell.visibility[i];
      result.cells.push_back(std::move(cell));
    }
    const double cnt = static_cast<double>(instances.size());
    agg.count = static_cast<int>(instances.size());
    auto mean_sem = [&](const std::vector<double>& v, double* mean,
                        double* sem) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= cnt;
      double var = 0.0;
      for (double x : v) var += (x - m) * (x - m);
      var = v.size() > 1 ? var / (cnt - 1.0) : 0.0;
      *mean = m;
      *sem = std::sqrt(var / cnt);
    };
    mean_sem(objectives, &agg.mean_objective, &agg.sem_objective);
    mean_sem(pofs, &agg.mean_pof, &agg.sem_pof);
    agg.mean_unconstrained /= cnt;
    agg.mean_support /= cnt;
    agg.mean_time /= cnt;
    for (double& v : agg.mean_visibility) v /= cnt;
    result.aggregates.push_back(std::move(agg));
  }
  return result;
}

namespace {

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string sweep_to_tsv(const SweepResult& result, bool with_timing) {
  std::string out = "delta\tobjective\tunconstrained\tpof\tsupport\ttime\n";
  for (const auto& agg : result.aggregates) {
    out += sig6(agg.delta);
    out += '\t';
    out += sig6(agg.mean_objective);
    out += '\t';
    out += sig6(agg.mean_unconstrained);
    out += '\t';
    out += sig6(agg.mean_pof);
    out += '\t';
    out += sig6(agg.mean_support);
    out += '\t';
    out += sig6(with_timing ? agg.mean_time : 0.0);
    out += '\n';
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result, bool with_timing) {
  ordered_json doc;
  doc["aggregates"] = ordered_json::array();
  for (const auto& agg : result.aggregates) {
    ordered_json a;
    a["delta"] = agg.delta;
    a["count"] = agg.count;
    a["objective"] = agg.mean_objective;
    a["objectiveSem"] = agg.sem_objective;
    a["unconstrained"] = agg.mean_unconstrained;
    a["pof"] = agg.mean_pof;
    a["pofSem"] = agg.sem_pof;
    a["support"] = agg.mean_support;
    a["time"] = with_timing ? agg.mean_time : 0.0;
    a["visibility"] = agg.mean_visibility;
    doc["aggregates"].push_back(a);
  }
  doc["cells"] = ordered_json::array();
  for (const auto& cell : result.cells) {
    ordered_json c;
    c["delta"] = cell.delta;
    c["instance"] = cell.instance_index;
    c["objective"] = cell.objective;
    c["unconstrained"] = cell.unconstrained;
    c["pof"] = cell.price_of_fairness;
    c["support"] = cell.support_size;
    c["oracleCalls"] = cell.oracle_calls;
    c["time"] = with_timing ? cell.wall_time_sec : 0.0;
    c["visibility"] = cell.visibility;
    doc["cells"].push_back(c);
  }
  return doc.dump(2) + "\n";
}

std::string render_sweep_report(const std::string& sweep_json) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(sweep_json);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sweep document is not valid JSON: ") +
                     e.what());
  }
  std::ostringstream out;
  out << "delta    objective (+/- sem)      pof (+/- sem)            "
         "support   time\n";
  for (const auto& a : doc.at("aggregates")) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "%-8s %-10s +/- %-10s %-10s +/- %-10s %-9s %s\n",
                  sig6(a.at("delta").get<double>()).c_str(),
                  sig6(a.at("objective").get<double>()).c_str(),
                  sig6(a.at("objectiveSem").get<double>()).c_str(),
                  sig6(a.at("pof").get<double>()).c_str(),
                  sig6(a.at("pofSem").get<double>()).c_str(),
                  sig6(a.at("support").get<double>()).c_str(),
                  sig6(a.at("time").get<double>()).c_str());
    out << line;
  }
  const auto& aggs = doc.at("aggregates");
  if (!aggs.empty() && aggs.front().contains("visibility")) {
    out << "\nmean visibility per item (rows: delta)\n";
    for (const auto& a : aggs) {
      out << sig6(a.at("delta").get<double>()) << ":";
      for (const auto& v : a.at("visibility"))
        out << ' ' << sig6(v.get<double>());
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace fairplan
