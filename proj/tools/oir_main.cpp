#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "oir/pipeline.h"

namespace {

void emit(const oir::io::Json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    oir::io::write_json(out, doc);
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace oir::pipeline;

  CLI::App app{"Mutual information rate, transfer entropy and O-information rate of Gaussian VAR processes"};
  app.require_subcommand(1);
  std::string out;
  bool no_timestamp = false;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a realization of a benchmark network");
  simulate->add_option("--scenario", sim.scenario, "sim1 or sim2")->required()->check(CLI::IsMember({"sim1", "sim2"}));
  simulate->add_option("--samples", sim.samples, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Generator seed");
  simulate->add_option("--burn-in", sim.burn_in, "Discarded leading samples")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--swap-filters", sim.swap_filters, "sim1: swap lowpass/highpass cross couplings");
  simulate->add_option("--csv", sim.out_csv, "Realization CSV path")->required();
  simulate->add_option("--model-out", sim.model_out, "Generating model document path");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a VAR model to a CSV time series");
  fit_cmd->add_option("--in", fit.in, "Input CSV")->required();
  fit_cmd->add_option("--order", fit.order, "aic, bic or fixed:<p>");
  fit_cmd->add_option("--max-order", fit.max_order, "Largest candidate order")->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "MIR decomposition of a block pair or one OIR increment");
  analyze->add_option("--model", an.model, "Model document")->required();
  analyze->add_option("--blocks", an.blocks, "Blocks document or inline LABEL=1,2;LABEL=3");
  analyze->add_option("--pair", an.pair, "Two block labels, e.g. X1,X3");
  analyze->add_option("--multiplet", an.multiplet, "Block labels of the multiplet");
  analyze->add_option("--target", an.target, "Block added to the rest of the multiplet");
  analyze->add_option("--nfreq", an.nfreq, "Frequency grid points")->check(CLI::Range(3, 1 << 20));
  analyze->add_flag("--merge-inst", an.merge_inst, "Fold instantaneous terms into the transfer to the target");
  analyze->add_option("--profiles", an.profiles_csv, "CSV for the spectral profiles");

  ScanArgs sc;
  auto* scan = app.add_subcommand("oir-scan", "O-information rate of every multiplet of the given sizes");
  scan->add_option("--model", sc.model, "Model document")->required();
  scan->add_option("--blocks", sc.blocks, "Blocks document or inline LABEL=1,2;LABEL=3");
  scan->add_option("--orders", sc.orders, "Multiplet sizes")->delimiter(',');
  scan->add_option("--multiplets", sc.multiplets, "Explicit multiplets, e.g. 'X1,X2,X3'");
  scan->add_option("--bands", sc.bands, "Bands document");
  scan->add_option("--nfreq", sc.nfreq, "Frequency grid points")->check(CLI::Range(3, 1 << 20));
  scan->add_flag("--merge-inst", sc.merge_inst, "Fold instantaneous terms into the transfer to the target");
  scan->add_option("--threads", sc.threads, "Worker threads")->check(CLI::PositiveNumber);
  scan->add_option("--profiles-dir", sc.profiles_dir, "Directory for per-multiplet profile CSVs");

  for (auto* cmd : {simulate, fit_cmd, analyze, scan}) {
    cmd->add_option("--out", out, "Output document (default stdout)");
    cmd->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp for byte-comparable output");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    sim.timestamp = fit.timestamp = an.timestamp = sc.timestamp = !no_timestamp;
    if (simulate->parsed()) {
      emit(run_simulate(sim), out);
    } else if (fit_cmd->parsed()) {
      emit(run_fit(fit), out);
    } else if (analyze->parsed()) {
      emit(run_analyze(an), out);
    } else if (scan->parsed()) {
      const auto doc = run_scan(sc);
      emit(doc, out);
      if (!scan_succeeded(doc)) return kPartialFailureExit;
    }
  } catch (const oir::Error& e) {
    std::cerr << error_document(e).dump(2) << "\n";
    return oir::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << R"({"status": "error", "code": "internal", "message": )" << oir::io::Json(e.what()).dump() << "}\n";
    return 4;
  }
  return 0;
}
