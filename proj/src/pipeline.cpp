#include "oir/pipeline.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <ctime>
#include <sstream>

#include "oir/simulate.h"

namespace oir::pipeline {
namespace {

Json header(const std::string& command, bool timestamp) {
  Json doc;
  doc["tool"] = "oir";
  doc["version"] = kVersion;
  doc["command"] = command;
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    doc["timestamp"] = buf;
  }
  return doc;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::vector<int> resolve(const BlockPartition& part, const std::string& list) {
  std::vector<int> ids;
  for (const auto& name : split_list(list, ',')) ids.push_back(part.find(name));
  return ids;
}

BlockPartition partition_for(const std::string& blocks, int q) {
  BlockPartition part = blocks.empty() ? BlockPartition::singletons(q) : io::parse_blocks(blocks);
  part.validate(q);
  return part;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

SpectralProfile relabel(SpectralProfile p, const std::string& label) {
  p.label = label;
  return p;
}

void write_oir_profiles(const std::string& dir, const OirResult& res, const BlockPartition& part) {
  std::filesystem::create_directories(dir);
  std::vector<SpectralProfile> columns{relabel(res.nu, "nu")};
  for (const auto& inc : res.increments) {
    const std::string tag = part.label(inc.target);
    columns.push_back(relabel(inc.profiles.total, "delta_" + tag));
    columns.push_back(relabel(inc.profiles.to_target, "delta_to_" + tag));
    columns.push_back(relabel(inc.profiles.from_target, "delta_from_" + tag));
    columns.push_back(relabel(inc.profiles.inst, "delta_inst_" + tag));
  }
  std::vector<const SpectralProfile*> ptrs;
  for (const auto& c : columns) ptrs.push_back(&c);
  const auto path = std::filesystem::path(dir) / ("oir_" + join(io::labels(part, res.multiplet), "_") + ".csv");
  io::write_profiles_csv(path.string(), ptrs);
}

Json record_to_json(const ScanRecord& rec, const BlockPartition& part) {
  if (rec.result) {
    Json doc = io::oir_to_json(*rec.result, part);
    Json out;
    out["status"] = "ok";
    for (auto& [k, v] : doc.items()) out[k] = v;
    return out;
  }
  Json out;
  out["status"] = "error";
  out["multiplet"] = io::labels(part, rec.multiplet);
  out["code"] = std::string(to_string(*rec.error));
  out["message"] = rec.message;
  return out;
}

}  // namespace

Json run_simulate(const SimulateArgs& args) {
  Benchmark bench;
  if (args.scenario == "sim1") {
    bench = build_sim1({args.swap_filters});
  } else if (args.scenario == "sim2") {
    bench = build_sim2();
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown scenario '" + args.scenario + "' (expected sim1 or sim2)");
  }
  const TimeSeriesData data = realize(bench.model, args.samples, args.seed, args.burn_in);

  Json config;
  config["scenario"] = args.scenario;
  config["samples"] = args.samples;
  config["seed"] = args.seed;
  config["burn_in"] = args.burn_in;
  config["swap_filters"] = args.swap_filters;
  config["out"] = args.out_csv;
  config["model_out"] = args.model_out;

  if (!args.out_csv.empty()) io::write_csv(args.out_csv, data);

  Json doc = header("simulate", args.timestamp);
  doc["config"] = config;
  doc["blocks"] = io::partition_to_json(bench.partition);
  doc["spectral_radius"] = spectral_radius(bench.model);
  doc["model"] = io::model_to_json(bench.model);
  if (!args.model_out.empty()) io::write_json(args.model_out, doc);
  return doc;
}

Json run_fit(const FitArgs& args) {
  const io::LoadedSeries loaded = io::load_csv(args.in);
  const TimeSeriesData& data = loaded.data;

  int order = 0;
  Json fit;
  if (args.order == "aic" || args.order == "bic") {
    const Criterion crit = args.order == "aic" ? Criterion::kAic : Criterion::kBic;
    const auto values = order_criteria(data, args.max_order, crit);
    order = select_order(data, args.max_order, crit);
    fit["criterion"] = args.order;
    Json vals = Json::array();
    for (double v : values) vals.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
    fit["criterion_values"] = std::move(vals);
  } else if (args.order.rfind("fixed:", 0) == 0) {
    try {
      order = std::stoi(args.order.substr(6));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad fixed order '" + args.order + "'");
    }
    fit["criterion"] = "fixed";
  } else {
    throw Error(ErrorCode::kInvalidArgument, "order must be aic, bic or fixed:<p>");
  }
  const VarModel model = fit_var(data, order);
  fit["selected_order"] = order;
  fit["samples"] = data.length();
  fit["channel_names"] = data.channel_names;
  fit["normalization"] = {{"means", loaded.normalization.means}, {"stds", loaded.normalization.stds}};
  fit["spectral_radius"] = spectral_radius(model);

  Json config;
  config["in"] = args.in;
  config["order"] = args.order;
  config["max_order"] = args.max_order;

  Json doc = header("fit", args.timestamp);
  doc["config"] = config;
  doc["fit"] = std::move(fit);
  doc["model"] = io::model_to_json(model);
  return doc;
}

Json run_analyze(const AnalyzeArgs& args) {
  const VarModel model = io::load_model(args.model);
  const StateSpaceModel ss = var_to_ss(model);
  const BlockPartition part = partition_for(args.blocks, model.q);
  const FrequencyGrid grid = FrequencyGrid::uniform(model.fs, args.nfreq);
  InteractionCache cache(ss);

  Json config;
  config["model"] = args.model;
  config["blocks"] = io::partition_to_json(part);
  config["pair"] = args.pair;
  config["multiplet"] = args.multiplet;
  config["target"] = args.target;
  config["nfreq"] = args.nfreq;
  config["merge_inst"] = args.merge_inst;

  Json doc = header("analyze", args.timestamp);
  doc["config"] = config;

  if (!args.pair.empty()) {
    const auto ids = resolve(part, args.pair);
    if (ids.size() != 2) throw Error(ErrorCode::kInvalidArgument, "--pair needs exactly two blocks");
    const IndexSet z1 = part.flatten({ids[0]});
    const IndexSet z2 = part.flatten({ids[1]});
    const MirDecomposition m = mir(cache, z1, z2, grid);
    Json result = io::mir_to_json(m);
    result["blocks"] = io::labels(part, ids);
    result["oracle"] = io::mir_to_json(mir_oracle(cache, z1, z2));
    doc["mir"] = std::move(result);
    if (!args.profiles_csv.empty()) {
      io::write_profiles_csv(args.profiles_csv, {&m.profiles->total, &m.profiles->te_1to2, &m.profiles->te_2to1, &m.profiles->inst});
    }
  } else if (!args.multiplet.empty()) {
    if (args.target.empty()) throw Error(ErrorCode::kInvalidArgument, "--multiplet needs --target");
    const auto ids = resolve(part, args.multiplet);
    const OirIncrement inc = oir_increment(cache, part, ids, part.find(args.target), grid, args.merge_inst);
    doc["increment"] = io::increment_to_json(inc, part);
    if (!args.profiles_csv.empty()) {
      io::write_profiles_csv(args.profiles_csv, {&inc.profiles.total, &inc.profiles.to_target, &inc.profiles.from_target, &inc.profiles.inst});
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "analyze needs --pair or --multiplet with --target");
  }
  return doc;
}

Json run_scan(const ScanArgs& args) {
  const VarModel model = io::load_model(args.model);
  const StateSpaceModel ss = var_to_ss(model);
  const BlockPartition part = partition_for(args.blocks, model.q);
  const FrequencyGrid grid = FrequencyGrid::uniform(model.fs, args.nfreq);
  const std::vector<NamedBand> bands = args.bands.empty() ? std::vector<NamedBand>{} : io::load_bands(args.bands);
  io::check_bands(bands, model.fs);

  std::vector<ScanRecord> records;
  if (!args.multiplets.empty()) {
    InteractionCache cache(ss);
    for (const auto& spec : args.multiplets) {
      ScanRecord rec;
      rec.multiplet = resolve(part, spec);
      try {
        rec.result = oir(cache, part, rec.multiplet, grid, bands, args.merge_inst);
      } catch (const Error& e) {
        rec.error = e.code();
        rec.message = e.what();
      }
      records.push_back(std::move(rec));
    }
  } else {
    if (args.orders.empty()) throw Error(ErrorCode::kInvalidArgument, "oir-scan needs --orders or --multiplets");
    records = oir_scan(ss, part, args.orders, grid, bands, {args.merge_inst, args.threads});
  }

  Json config;
  config["model"] = args.model;
  config["blocks"] = io::partition_to_json(part);
  config["orders"] = args.orders;
  config["multiplets"] = args.multiplets;
  config["bands"] = io::bands_to_json(bands);
  config["nfreq"] = args.nfreq;
  config["merge_inst"] = args.merge_inst;
  config["threads"] = args.threads;
  config["profiles_dir"] = args.profiles_dir;

  Json results = Json::array();
  for (const auto& rec : records) {
    results.push_back(record_to_json(rec, part));
    if (rec.result && !args.profiles_dir.empty()) write_oir_profiles(args.profiles_dir, *rec.result, part);
  }
  Json doc = header("oir-scan", args.timestamp);
  doc["config"] = config;
  doc["results"] = std::move(results);
  return doc;
}

bool scan_succeeded(const Json& doc) {
  for (const auto& rec : doc.at("results")) {
    if (rec.at("status") != "ok") return false;
  }
  return true;
}

Json error_document(const Error& e) {
  Json doc;
  doc["status"] = "error";
  doc["code"] = std::string(to_string(e.code()));
  doc["exit_code"] = exit_code(e.code());
  doc["message"] = e.what();
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    doc["residual"] = ce->residual();
    doc["iterations"] = ce->iterations();
  }
  if (const auto* se = dynamic_cast<const SpectrumError*>(&e)) doc["freq_hz"] = se->freq_hz();
  return doc;
}

}  // namespace oir::pipeline
