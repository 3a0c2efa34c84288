#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oir/io.h"

namespace oir::pipeline {

using io::Json;

inline constexpr const char* kVersion = "0.1.0";

struct SimulateArgs {
  std::string scenario = "sim1";
  int samples = 10000;
  std::uint64_t seed = 0;
  int burn_in = 1000;
  bool swap_filters = false;
  std::string out_csv;
  std::string model_out;
  bool timestamp = true;
};

struct FitArgs {
  std::string in;
  /// "aic", "bic" or "fixed:<p>".
  std::string order = "bic";
  int max_order = 10;
  bool timestamp = true;
};

struct AnalyzeArgs {
  std::string model;
  std::string blocks;
  /// "A,B": MIR decomposition between two blocks.
  std::string pair;
  /// "A,B,C" with target: a single OIR increment.
  std::string multiplet;
  std::string target;
  int nfreq = 1025;
  bool merge_inst = false;
  std::string profiles_csv;
  bool timestamp = true;
};

struct ScanArgs {
  std::string model;
  std::string blocks;
  std::vector<int> orders;
  /// Explicit multiplets, each "A,B,C"; used instead of orders when given.
  std::vector<std::string> multiplets;
  std::string bands;
  int nfreq = 1025;
  bool merge_inst = false;
  int threads = 1;
  std::string profiles_dir;
  bool timestamp = true;
};

/// Writes the realization CSV (and model document when requested) and
/// returns the run document.
Json run_simulate(const SimulateArgs& args);

/// Returns the model document with the fit metadata and config embedded.
Json run_fit(const FitArgs& args);

Json run_analyze(const AnalyzeArgs& args);

/// Per-multiplet records carry "status": "ok" or "error" with the error code.
Json run_scan(const ScanArgs& args);

/// True when every record of a scan document has status "ok".
bool scan_succeeded(const Json& doc);

Json error_document(const Error& e);

/// Exit status for a scan in which some multiplets failed.
inline constexpr int kPartialFailureExit = 3;

}  // namespace oir::pipeline
