#include "fairplan/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairplan/errors.hpp"

namespace fairplan {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

std::string instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["n"] = inst.n;
  doc["K"] = inst.K;
  doc["delta"] = inst.delta;
  doc["items"] = ordered_json::array();
  for (int i = 0; i < inst.n; ++i) {
    ordered_json item;
    item["id"] = inst.ids.empty() ? i + 1 : inst.ids[i];
    item["w"] = inst.w[i];
    item["r"] = inst.r[i];
    item["q"] = inst.q[i];
    item["a"] = inst.a[i];
    item["b"] = inst.b[i];
    doc["items"].push_back(item);
  }
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance document is not valid JSON: ") +
                     e.what());
  }
  Instance inst;
  try {
    inst.n = doc.at("n").get<int>();
    inst.K = doc.at("K").get<int>();
    inst.delta = doc.at("delta").get<double>();
    for (const auto& item : doc.at("items")) {
      inst.ids.push_back(item.value("id", int64_t(inst.ids.size() + 1)));
      inst.w.push_back(item.at("w").get<double>());
      inst.r.push_back(item.at("r").get<double>());
      inst.q.push_back(item.at("q").get<double>());
      inst.a.push_back(item.at("a").get<double>());
      inst.b.push_back(item.at("b").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance document missing fields: ") +
                     e.what());
  }
  inst.validate();
  return inst;
}

Instance load_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

void save_instance(const Instance& inst, const std::string& path) {
  write_file(path, instance_to_json(inst));
}

namespace {

ordered_json distribution_doc(const Instance& inst,
                              const DistributionSolution& sol) {
  ordered_json doc;
  doc["objective"] = sol.objective;
  doc["support"] = ordered_json::array();
  for (const auto& [s, p] : sol.support) {
    ordered_json entry;
    entry["items"] = ordered_json::array();
    for (int i : s)
      entry["items"].push_back(inst.ids.empty() ? i + 1 : inst.ids[i]);
    entry["p"] = p;
    doc["support"].push_back(entry);
  }
  return doc;
}

}  // namespace

std::string distribution_to_json(const Instance& inst,
                                 const DistributionSolution& sol) {
  return distribution_doc(inst, sol).dump(2) + "\n";
}

std::string report_to_json(const Instance& inst, const SolveReport& report,
                           const std::string& method,
                           const std::string& oracle, bool with_timing) {
  ordered_json doc;
  doc["method"] = method;
  doc["oracle"] = oracle;
  doc["objective"] = report.objective;
  doc["iterations"] = report.iterations;
  doc["oracleCalls"] = report.oracle_calls;
  doc["wallTimeSec"] = with_timing ? report.wall_time_sec : 0.0;
  doc["solution"] = distribution_doc(inst, report.solution);
  ordered_json dual;
  dual["rho"] = report.dual.rho;
  dual["z"] = ordered_json::array();
  for (int i = 0; i < report.dual.z.n; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < report.dual.z.n; ++j) row.push_back(report.dual.z(i, j));
    dual["z"].push_back(row);
  }
  doc["dual"] = dual;
  doc["generatedColumns"] = ordered_json::array();
  for (const auto& s : report.generated_columns) {
    ordered_json col = ordered_json::array();
    for (int i : s) col.push_back(inst.ids.empty() ? i + 1 : inst.ids[i]);
    doc["generatedColumns"].push_back(col);
  }
  return doc.dump(2) + "\n";
}

ZMatrix zmatrix_from_json(const std::string& text, int n) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix document is not valid JSON: ") +
                     e.what());
  }
  const auto& rows = doc.contains("z") ? doc.at("z") : doc;
  if (static_cast<int>(rows.size()) != n)
    throw InputError("matrix has " + std::to_string(rows.size()) +
                     " rows, expected " + std::to_string(n));
  ZMatrix z(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw InputError("matrix row " + std::to_string(i) + " has wrong size");
    for (int j = 0; j < n; ++j) {
      const double v = rows[i][j].get<double>();
      if (i == j && v != 0.0)
        throw InputError("matrix diagonal must be zero");
      if (v < 0.0) throw InputError("matrix entries must be >= 0");
      z(i, j) = v;
    }
  }
  return z;
}

}  // namespace fairplan
