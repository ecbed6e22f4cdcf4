#ifndef FAIRPLAN_IO_HPP
#define FAIRPLAN_IO_HPP

#include <string>

#include "fairplan/instance.hpp"
#include "fairplan/solver.hpp"

namespace fairplan {

// Instance document:
//   {"n": 3, "K": 2, "delta": 0.5,
//    "items": [{"id": 1, "w": .., "r": .., "q": .., "a": .., "b": ..}, ...]}
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// Distribution document: {"objective": x, "support": [{"items": [...ids],
// "p": prob}, ...]}, support sorted by item sequence.
std::string distribution_to_json(const Instance& inst,
                                 const DistributionSolution& sol);

// Solve report document; wall time is written as 0 unless with_timing is
// set, so identical runs produce identical bytes.
std::string report_to_json(const Instance& inst, const SolveReport& report,
                           const std::string& method,
                           const std::string& oracle, bool with_timing);

// Square matrix document {"n": k, "z": [[...], ...]} or the literal "zero"
// handled by callers.
ZMatrix zmatrix_from_json(const std::string& text, int n);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fairplan

#endif  // FAIRPLAN_IO_HPP
