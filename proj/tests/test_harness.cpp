#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cli.hpp"
#include "fairplan/errors.hpp"
#include "fairplan/harness.hpp"
#include "fairplan/io.hpp"
#include "test_support.hpp"

using namespace fairplan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fairplan_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"fairplan"};
  owned.insert(owned.end(), args);
  std::vector<const char*> argv;
  for (const auto& s : owned) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("gen_synthetic: family parameters and determinism") {
  SyntheticSpec spec;
  spec.n = 10;
  spec.K = 5;
  spec.beta = -1.0;
  spec.seed = 42;
  spec.instance_count = 3;
  const auto a = gen_synthetic(spec);
  const auto b = gen_synthetic(spec);
  REQUIRE(a.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(a[k].w == b[k].w);
    CHECK(a[k].r == b[k].r);
    CHECK(a[k].q == a[k].w);  // default rule q = w
    CHECK(a[k].a == std::vector<double>(10, 0.0));
    CHECK(a[k].b == std::vector<double>(10, 1.0));
    for (int i = 0; i < 10; ++i) {
      CHECK(a[k].r[i] >= 0.0);
      CHECK(a[k].r[i] <= 1.0);
      // w = exp(beta r + theta) with theta in [0, 0.5]
      const double theta = std::log(a[k].w[i]) + a[k].r[i];
      CHECK(theta >= -1e-12);
      CHECK(theta <= 0.5 + 1e-12);
    }
  }

  SyntheticSpec zero_beta = spec;
  zero_beta.beta = 0.0;
  const auto c = gen_synthetic(zero_beta);
  for (int i = 0; i < 10; ++i) {
    CHECK(c[0].w[i] >= 1.0);              // exp(theta) with theta >= 0
    CHECK(c[0].w[i] <= std::exp(0.5) + 1e-12);
  }
}

TEST_CASE("two-group presets") {
  const Instance quad = gen_two_group_quadrants(7);
  CHECK(quad.n == 4);
  CHECK(quad.K == 2);
  CHECK(quad.q[0] >= 0.5);
  CHECK(quad.q[2] <= 0.5);
  CHECK(quad.r[0] >= 0.6);
  CHECK(quad.r[1] <= 0.6);
  CHECK(quad.w == quad.q);

  const Instance attract = gen_two_group_attractive(8, 3, 2, -0.5, 11);
  CHECK(attract.n == 8);
  CHECK(attract.q == attract.w);
  CHECK_THROWS_AS(gen_two_group_attractive(4, 2, 9, -1.0, 1), InputError);

  // Degenerate ranges collapse to constant vectors.
  QuadrantRanges point;
  point.high_q = point.low_q = {0.4, 0.4};
  point.high_r = point.low_r = {0.9, 0.9};
  const Instance flat = gen_two_group_quadrants(3, 0.0, 4, 2, point);
  CHECK(flat.q == std::vector<double>(4, 0.4));
  CHECK(flat.r == std::vector<double>(4, 0.9));
}

TEST_CASE("ingest_ratings: filtering, weights, errors") {
  TempDir tmp;
  const std::string ratings = tmp.file("ratings.tsv");
  {
    std::ofstream out(ratings);
    // item 1: two raters, avg 4.5; item 2: one rater; item 3: avg 2.0 (low);
    // item 4: two raters, avg 3.5.
    out << "1\t1\t4\n2\t1\t5\n";
    out << "1\t2\t5\n";
    out << "1\t3\t2\n2\t3\t2\n";
    out << "1\t4\t3\n2\t4\t4\n";
  }
  RatingsSpec spec;
  spec.min_raters = 2;
  spec.min_avg_rating = 3.0;
  spec.top_n = 5;
  spec.scale = 0.5;
  spec.K = 2;
  const Instance inst = ingest_ratings(ratings, spec);
  CHECK(inst.n == 2);
  CHECK(inst.ids == std::vector<std::int64_t>{1, 4});  // sorted by avg desc
  CHECK(inst.w[0] == doctest::Approx(0.5 * 4.5));
  CHECK(inst.w[1] == doctest::Approx(0.5 * 3.5));
  CHECK(inst.q == inst.w);
  CHECK(inst.r == std::vector<double>(2, 1.0));

  // Malformed row reports its line number.
  const std::string broken = tmp.file("broken.tsv");
  write_file(broken, "1\t1\t4\nnot-a-row\n");
  try {
    ingest_ratings(broken, spec);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  // Too few survivors for K.
  RatingsSpec strict = spec;
  strict.min_raters = 3;
  CHECK_THROWS_AS(ingest_ratings(ratings, strict), InputError);

  // Genre filter through the metadata file; absent metadata skips the filter.
  const std::string meta = tmp.file("meta.tsv");
  write_file(meta, "1\tdrama|comedy\n4\thorror\n");
  RatingsSpec drama = spec;
  drama.K = 1;
  drama.genre = "drama";
  drama.metadata_path = meta;
  const Instance filtered = ingest_ratings(ratings, drama);
  CHECK(filtered.n == 1);
  CHECK(filtered.ids == std::vector<std::int64_t>{1});
  RatingsSpec no_meta = drama;
  no_meta.metadata_path.clear();
  CHECK(ingest_ratings(ratings, no_meta).n == 2);
}

TEST_CASE("ratings stand-in generator mimics the case-study shape") {
  const Instance inst = synthetic_ratings_instance(20, 3.14, 4.09, 1.0 / 20,
                                                   5, 99);
  CHECK(inst.n == 20);
  CHECK(inst.K == 5);
  for (int i = 0; i + 1 < inst.n; ++i) CHECK(inst.w[i] >= inst.w[i + 1]);
  CHECK(inst.w.front() <= 4.09 / 20 + 1e-12);
  CHECK(inst.w.back() >= 3.14 / 20 - 1e-12);
}

TEST_CASE("delta_sweep: monotone objective, pof range, visibility budget") {
  SyntheticSpec spec;
  spec.n = 6;
  spec.K = 3;
  spec.beta = -1.0;
  spec.seed = 5;
  spec.instance_count = 4;
  const auto instances = gen_synthetic(spec);
  SolverConfig cfg;
  cfg.oracle.method = OracleMethod::Half;
  const std::vector<double> deltas{0.0, 0.25, 0.5, 1.0};
  const SweepResult result = delta_sweep(instances, deltas, cfg);
  REQUIRE(result.aggregates.size() == 4);
  REQUIRE(result.cells.size() == 16);

  for (size_t k = 1; k < result.aggregates.size(); ++k)
    CHECK(result.aggregates[k].mean_objective >=
          result.aggregates[k - 1].mean_objective - 1e-9);
  for (const auto& cell : result.cells) {
    CHECK(cell.price_of_fairness >= -1e-9);
    CHECK(cell.price_of_fairness <= 1.0 + 1e-9);
    CHECK(cell.support_size >= 1);
    CHECK(cell.support_size <= spec.n * (spec.n - 1) + 1);
    double visibility_total = 0.0;
    for (double v : cell.visibility) visibility_total += v;
    CHECK(visibility_total <= spec.K + 1e-9);
  }
  // Objective column is nondecreasing per instance as well.
  for (int inst_ix = 0; inst_ix < 4; ++inst_ix) {
    double prev = -1.0;
    for (const auto& cell : result.cells) {
      if (cell.instance_index != inst_ix) continue;
      CHECK(cell.objective >= prev - 1e-9);
      prev = cell.objective;
    }
  }

  const std::string tsv = sweep_to_tsv(result, false);
  CHECK(tsv.rfind("delta\tobjective\tunconstrained\tpof\tsupport\ttime\n",
                  0) == 0);
  const std::string rendered = render_sweep_report(sweep_to_json(result, false));
  CHECK(rendered.find("delta") != std::string::npos);

  // A vacuous fairness level makes the price of fairness vanish.
  const SweepResult loose = delta_sweep(instances, {1000.0}, cfg);
  CHECK(loose.aggregates.front().mean_pof ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("cli: gen/solve/oracle/sweep round trip with stable bytes") {
  TempDir tmp;
  const std::string prefix = tmp.file("inst");
  REQUIRE(cli({"gen", "--preset", "appendixF", "--n", "5", "--K", "2",
               "--beta", "-0.5", "--seed", "9", "--instances", "2", "--out",
               prefix}) == 0);
  const std::string inst_path = prefix + "_0.json";
  REQUIRE(fs::exists(inst_path));
  const Instance inst = load_instance(inst_path);
  CHECK(inst.n == 5);

  const std::string report1 = tmp.file("report1.json");
  const std::string report2 = tmp.file("report2.json");
  REQUIRE(cli({"solve", "--instance", inst_path, "--delta", "0.1",
               "--method", "colgen", "--oracle", "half", "--out", report1}) ==
          0);
  REQUIRE(cli({"solve", "--instance", inst_path, "--delta", "0.1",
               "--method", "colgen", "--oracle", "half", "--out", report2}) ==
          0);
  CHECK(read_file(report1) == read_file(report2));  // byte-identical reruns

  const std::string oracle_out = tmp.file("oracle.json");
  REQUIRE(cli({"oracle", "--instance", inst_path, "--z", "zero", "--method",
               "brute", "--out", oracle_out}) == 0);
  const std::string oracle_text = read_file(oracle_out);
  CHECK(oracle_text.find("value") != std::string::npos);

  const std::string tsv1 = tmp.file("sweep1.tsv");
  const std::string tsv2 = tmp.file("sweep2.tsv");
  const std::string sweep_json = tmp.file("sweep.json");
  for (const auto& out : {tsv1, tsv2})
    REQUIRE(cli({"sweep", "--preset", "appendixF", "--n", "5", "--K", "2",
                 "--beta", "-0.5", "--deltas", "0,0.5", "--instances", "2",
                 "--seed", "3", "--oracle", "half", "--out", out, "--json",
                 sweep_json}) == 0);
  CHECK(read_file(tsv1) == read_file(tsv2));
  REQUIRE(cli({"report", "--json", sweep_json}) == 0);

  // Unknown flags exit with the usage code.
  CHECK(cli({"solve", "--no-such-flag"}) == 2);
  CHECK(cli({"solve", "--instance", tmp.file("missing.json")}) == 2);
}

TEST_CASE("cli: oracle value at zero dual equals the best plain revenue") {
  TempDir tmp;
  const std::string prefix = tmp.file("rf");
  REQUIRE(cli({"gen", "--preset", "appendixF", "--n", "6", "--K", "3",
               "--seed", "21", "--out", prefix}) == 0);
  Instance inst = load_instance(prefix + "_0.json");
  // Make it revenue-fair so the exact path applies.
  inst.a.assign(inst.n, 1.0);
  inst.b.assign(inst.n, 0.0);
  const std::string path = tmp.file("rf.json");
  save_instance(inst, path);

  const std::string out = tmp.file("oracle.json");
  REQUIRE(cli({"oracle", "--instance", path, "--z", "zero", "--method",
               "exact", "--out", out}) == 0);
  double best = 0.0;
  for_each_assortment(inst.n, inst.K, [&](const Assortment& s) {
    best = std::max(best, rev(inst, s));
  });
  const std::string text = read_file(out);
  const auto pos = text.find(':');
  const double value = std::stod(text.substr(pos + 1));
  CHECK(value == doctest::Approx(best).epsilon(1e-9));
}
