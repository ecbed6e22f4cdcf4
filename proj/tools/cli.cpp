#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairplan/errors.hpp"
#include "fairplan/harness.hpp"
#include "fairplan/io.hpp"
#include "fairplan/knapsack.hpp"
#include "fairplan/solver.hpp"

namespace fairplan {

namespace {

const std::map<std::string, OracleMethod> kOracleNames = {
    {"auto", OracleMethod::Auto},   {"exact", OracleMethod::Exact},
    {"half", OracleMethod::Half},   {"uhalf", OracleMethod::UniformHalf},
    {"ptas", OracleMethod::Ptas},   {"fptas", OracleMethod::Fptas},
    {"brute", OracleMethod::Brute}};

std::string oracle_name(OracleMethod m) {
  for (const auto& [name, method] : kOracleNames)
    if (method == m) return name;
  return "auto";
}

OracleSpec make_oracle_spec(const std::string& name, double epsilon) {
  OracleSpec spec;
  spec.method = kOracleNames.at(name);
  spec.epsilon = epsilon;
  spec.fptas_epsilon = epsilon;
  return spec;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::fputs(content.c_str(), stdout);
  else
    write_file(out_path, content);
}

std::vector<double> parse_deltas(const std::string& csv) {
  std::vector<double> out;
  std::string cur;
  for (char ch : csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (out.empty()) throw InputError("no delta values given");
  return out;
}

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Fair assortment planning under the MNL choice model: randomized "
      "assortments maximizing revenue subject to pairwise fairness."};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate synthetic instance files");
  std::string gen_preset = "appendixF";
  int gen_n = 10, gen_k = 5, gen_count = 1, gen_m = 2;
  double gen_beta = -1.0, gen_delta = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "instance";
  gen->add_option("--preset", gen_preset,
                  "Instance family: appendixF | quadrants | attractive")
      ->check(CLI::IsMember({"appendixF", "quadrants", "attractive"}));
  gen->add_option("--n", gen_n, "Item count");
  gen->add_option("--K", gen_k, "Cardinality cap");
  gen->add_option("--m", gen_m, "Highly attractive items (attractive preset)");
  gen->add_option("--beta", gen_beta, "Price sensitivity (< 0)");
  gen->add_option("--delta", gen_delta, "Fairness level stored in the file");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--instances", gen_count, "How many instances");
  gen->add_option("--out", gen_out,
                  "Output path prefix; files get _<k>.json appended");

  // ---- ingest ----
  auto* ingest = app.add_subcommand(
      "ingest", "Build an instance from (user, item, rating) triples");
  std::string in_ratings, in_out = "-", in_genre, in_meta;
  RatingsSpec rspec;
  std::string in_delim = "\t";
  ingest->add_option("--ratings", in_ratings, "Ratings file")->required();
  ingest->add_option("--min-raters", rspec.min_raters, "Minimum rating count");
  ingest->add_option("--min-avg", rspec.min_avg_rating,
                     "Minimum average rating");
  ingest->add_option("--top-n", rspec.top_n, "Keep best-rated items");
  ingest->add_option("--scale", rspec.scale, "Weight scale s (w = s * gamma)");
  ingest->add_option("--K", rspec.K, "Cardinality cap");
  ingest->add_option("--delta", rspec.delta, "Fairness level");
  ingest->add_option("--delimiter", in_delim, "Column delimiter (default tab)");
  ingest->add_option("--genre", in_genre, "Optional genre filter");
  ingest->add_option("--metadata", in_meta,
                     "Item metadata (id<TAB>genre|genre...)");
  ingest->add_option("--out", in_out, "Output instance file (- for stdout)");

  // ---- solve ----
  auto* solve_cmd =
      app.add_subcommand("solve", "Solve one instance and print a report");
  std::string so_instance, so_out = "-", so_method = "colgen",
              so_oracle = "auto";
  double so_delta = -1.0, so_eps = 0.25;
  int so_tmax = 10000;
  std::int64_t so_qmax = 0;
  bool so_timing = false;
  solve_cmd->add_option("--instance", so_instance, "Instance file")
      ->required();
  solve_cmd->add_option("--delta", so_delta,
                        "Override the instance's fairness level");
  solve_cmd->add_option("--method", so_method, "colgen | ellipsoid")
      ->check(CLI::IsMember({"colgen", "ellipsoid"}));
  solve_cmd
      ->add_option("--oracle", so_oracle,
                   "auto | exact | half | uhalf | ptas | fptas | brute")
      ->check(CLI::IsMember(
          {"auto", "exact", "half", "uhalf", "ptas", "fptas", "brute"}));
  solve_cmd->add_option("--epsilon", so_eps, "Accuracy for ptas/fptas");
  solve_cmd->add_option("--tmax", so_tmax, "Ellipsoid iteration cap");
  solve_cmd->add_option(
      "--qmax", so_qmax,
      "Max adjusted integer quality; only reports the theoretical ellipsoid "
      "iteration bound, never enforces it");
  solve_cmd->add_flag("--timing", so_timing, "Write real wall times");
  solve_cmd->add_option("--out", so_out, "Report file (- for stdout)");

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Run one separation-oracle call on (instance, z)");
  std::string or_instance, or_z = "zero", or_method = "auto", or_out = "-";
  double or_eps = 0.25;
  oracle_cmd->add_option("--instance", or_instance, "Instance file")
      ->required();
  oracle_cmd->add_option("--z", or_z, R"(Matrix file or "zero")");
  oracle_cmd
      ->add_option("--method", or_method,
                   "auto | exact | half | uhalf | ptas | fptas | brute")
      ->check(CLI::IsMember(
          {"auto", "exact", "half", "uhalf", "ptas", "fptas", "brute"}));
  oracle_cmd->add_option("--epsilon", or_eps, "Accuracy for ptas/fptas");
  oracle_cmd->add_option("--out", or_out, "Output file (- for stdout)");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Solve a family of instances over a range of fairness levels");
  std::string sw_preset = "appendixF", sw_deltas = "0,0.2,0.4,0.6,0.8,1.0";
  std::string sw_out = "-", sw_json, sw_oracle = "half", sw_instance;
  int sw_n = 10, sw_k = 5, sw_count = 100;
  double sw_beta = -1.0, sw_eps = 0.25;
  std::uint64_t sw_seed = 1;
  bool sw_timing = false;
  sweep_cmd->add_option("--preset", sw_preset, "appendixF | quadrants | attractive")
      ->check(CLI::IsMember({"appendixF", "quadrants", "attractive"}));
  sweep_cmd->add_option("--instance", sw_instance,
                        "Sweep a single instance file instead of a preset");
  sweep_cmd->add_option("--n", sw_n, "Item count");
  sweep_cmd->add_option("--K", sw_k, "Cardinality cap");
  sweep_cmd->add_option("--beta", sw_beta, "Price sensitivity");
  sweep_cmd->add_option("--deltas", sw_deltas, "Comma-separated deltas");
  sweep_cmd->add_option("--instances", sw_count, "Instances per preset");
  sweep_cmd->add_option("--seed", sw_seed, "RNG seed");
  sweep_cmd
      ->add_option("--oracle", sw_oracle,
                   "auto | exact | half | uhalf | ptas | fptas | brute")
      ->check(CLI::IsMember(
          {"auto", "exact", "half", "uhalf", "ptas", "fptas", "brute"}));
  sweep_cmd->add_option("--epsilon", sw_eps, "Accuracy for ptas/fptas");
  sweep_cmd->add_flag("--timing", sw_timing, "Write real wall times");
  sweep_cmd->add_option("--out", sw_out, "Aggregate TSV (- for stdout)");
  sweep_cmd->add_option("--json", sw_json, "Full machine-readable result");

  // ---- report ----
  auto* report_cmd =
      app.add_subcommand("report", "Render a sweep JSON as a summary table");
  std::string rp_json;
  report_cmd->add_option("--json", rp_json, "Sweep JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    std::vector<Instance> instances;
    if (gen_preset == "quadrants") {
      Rng seeds(gen_seed);
      for (int k = 0; k < gen_count; ++k)
        instances.push_back(
            gen_two_group_quadrants(seeds.next_u64(), gen_delta,
                                    gen->count("--n") ? gen_n : 4,
                                    gen->count("--K") ? gen_k : 2));
    } else if (gen_preset == "attractive") {
      Rng seeds(gen_seed);
      for (int k = 0; k < gen_count; ++k)
        instances.push_back(gen_two_group_attractive(
            gen_n, gen_k, gen_m, gen_beta, seeds.next_u64(), gen_delta));
    } else {
      SyntheticSpec spec;
      spec.n = gen_n;
      spec.K = gen_k;
      spec.beta = gen_beta;
      spec.delta = gen_delta;
      spec.seed = gen_seed;
      spec.instance_count = gen_count;
      instances = gen_synthetic(spec);
    }
    for (size_t k = 0; k < instances.size(); ++k)
      save_instance(instances[k],
                    gen_out + "_" + std::to_string(k) + ".json");
    return 0;
  }

  if (ingest->parsed()) {
    rspec.delimiter = in_delim.empty() ? '\t' : in_delim[0];
    rspec.genre = in_genre;
    rspec.metadata_path = in_meta;
    const Instance inst = ingest_ratings(in_ratings, rspec);
    emit(in_out, instance_to_json(inst));
    return 0;
  }

  if (solve_cmd->parsed()) {
    Instance inst = load_instance(so_instance);
    if (so_delta >= 0.0) inst.delta = so_delta;
    SolverConfig cfg;
    cfg.method = so_method == "colgen" ? SolveMethod::ColumnGeneration
                                       : SolveMethod::Ellipsoid;
    cfg.oracle = make_oracle_spec(so_oracle, so_eps);
    cfg.ellipsoid.t_max = so_tmax;
    cfg.ellipsoid.q_max = so_qmax;
    if (cfg.method == SolveMethod::Ellipsoid && so_qmax > 0) {
      const double bound = std::pow(static_cast<double>(inst.n), 12.0) *
                           std::log(inst.n * static_cast<double>(so_qmax));
      std::fprintf(stderr,
                   "note: polynomial iteration guarantee is of order "
                   "n^12 log(n q_max) ~ %.3g; running with t_max = %d\n",
                   bound, so_tmax);
    }
    const SolveReport report = solve(inst, cfg);
    emit(so_out, report_to_json(inst, report, so_method,
                                oracle_name(cfg.oracle.method), so_timing));
    return 0;
  }

  if (oracle_cmd->parsed()) {
    const Instance inst = load_instance(or_instance);
    const ZMatrix z = or_z == "zero"
                          ? ZMatrix::zero(inst.n)
                          : zmatrix_from_json(read_file(or_z), inst.n);
    OracleResult res =
        oracle_dispatch(inst, z, make_oracle_spec(or_method, or_eps), {});
    std::string out = "{\n  \"value\": ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", res.value);
    out += buf;
    out += ",\n  \"items\": [";
    for (size_t i = 0; i < res.set.size(); ++i) {
      out += std::to_string(inst.ids.empty() ? res.set[i] + 1
                                             : inst.ids[res.set[i]]);
      if (i + 1 < res.set.size()) out += ", ";
    }
    out += "]\n}\n";
    emit(or_out, out);
    return 0;
  }

  if (sweep_cmd->parsed()) {
    std::vector<Instance> instances;
    if (!sw_instance.empty()) {
      instances.push_back(load_instance(sw_instance));
    } else if (sw_preset == "quadrants") {
      Rng seeds(sw_seed);
      for (int k = 0; k < sw_count; ++k)
        instances.push_back(gen_two_group_quadrants(
            seeds.next_u64(), 0.0, sweep_cmd->count("--n") ? sw_n : 4,
            sweep_cmd->count("--K") ? sw_k : 2));
    } else if (sw_preset == "attractive") {
      Rng seeds(sw_seed);
      for (int k = 0; k < sw_count; ++k)
        instances.push_back(gen_two_group_attractive(sw_n, sw_k, 2, sw_beta,
                                                     seeds.next_u64(), 0.0));
    } else {
      SyntheticSpec spec;
      spec.n = sw_n;
      spec.K = sw_k;
      spec.beta = sw_beta;
      spec.seed = sw_seed;
      spec.instance_count = sw_count;
      instances = gen_synthetic(spec);
    }
    SolverConfig cfg;
    cfg.oracle = make_oracle_spec(sw_oracle, sw_eps);
    const SweepResult result =
        delta_sweep(instances, parse_deltas(sw_deltas), cfg);
    emit(sw_out, sweep_to_tsv(result, sw_timing));
    if (!sw_json.empty())
      write_file(sw_json, sweep_to_json(result, sw_timing));
    return 0;
  }

  if (report_cmd->parsed()) {
    std::fputs(render_sweep_report(read_file(rp_json)).c_str(), stdout);
    return 0;
  }
  return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace fairplan
