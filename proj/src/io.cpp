#include "oir/io.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace oir::io {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& what) {
  throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(const std::string& cell, double& value) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& doc, int rows, int cols, const std::string& what) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != rows) {
    throw Error(ErrorCode::kParse, what + " must have " + std::to_string(rows) + " rows");
  }
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!doc[i].is_array() || static_cast<int>(doc[i].size()) != cols) {
      throw Error(ErrorCode::kParse, what + " row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
    }
    for (int j = 0; j < cols; ++j) {
      if (!doc[i][j].is_number()) throw Error(ErrorCode::kParse, what + " has a non-numeric entry");
      m(i, j) = doc[i][j].get<double>();
    }
  }
  return m;
}

IndexSet channels_from_json(const Json& doc, const std::string& label) {
  if (!doc.is_array() || doc.empty()) throw Error(ErrorCode::kParse, "block " + label + " needs a nonempty channel list");
  IndexSet out;
  for (const auto& v : doc) {
    if (!v.is_number_integer()) throw Error(ErrorCode::kParse, "block " + label + " channels must be integers");
    if (v.get<int>() < 1) throw Error(ErrorCode::kParse, "block " + label + " channels are one-based");
    out.push_back(v.get<int>() - 1);
  }
  return out;
}

}  // namespace

LoadedSeries parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  double fs = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> names;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      if (body.rfind("fs=", 0) == 0) {
        if (!parse_double(trim(body.substr(3)), fs) || !(fs > 0.0)) parse_error(source, line_no, "invalid sampling frequency");
      }
      continue;
    }
    if (std::isnan(fs)) parse_error(source, line_no, "missing '# fs=<Hz>' line before the header");
    names = split(t, ',');
    break;
  }
  if (names.empty()) parse_error(source, line_no, "missing header row");
  const int q = static_cast<int>(names.size());

  std::vector<double> values;
  int rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t, ',');
    if (static_cast<int>(cells.size()) != q) {
      parse_error(source, line_no, "expected " + std::to_string(q) + " columns, found " + std::to_string(cells.size()));
    }
    for (int j = 0; j < q; ++j) {
      double v = 0.0;
      if (!parse_double(cells[j], v) || !std::isfinite(v)) {
        parse_error(source, line_no, "column " + std::to_string(j + 1) + " is not a finite number: '" + cells[j] + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }

  LoadedSeries out;
  out.data.fs = fs;
  out.data.channel_names = names;
  out.data.samples = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, q);
  if (rows < 2) throw Error(ErrorCode::kParse, source + ": need at least 2 data rows");

  for (int j = 0; j < q; ++j) {
    auto col = out.data.samples.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / (rows - 1));
    if (!(sd > 0.0)) throw Error(ErrorCode::kZeroVariance, source + ": channel '" + names[j] + "' has zero variance");
    col /= sd;
    out.normalization.means.push_back(mean);
    out.normalization.stds.push_back(sd);
  }
  out.data.validate();
  return out;
}

LoadedSeries load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return parse_csv(in, path);
}

void write_csv(std::ostream& out, const TimeSeriesData& data) {
  out << "# fs=" << std::setprecision(17) << data.fs << "\n";
  for (int j = 0; j < data.channels(); ++j) out << (j ? "," : "") << data.channel_names[j];
  out << "\n";
  for (int i = 0; i < data.length(); ++i) {
    for (int j = 0; j < data.channels(); ++j) out << (j ? "," : "") << data.samples(i, j);
    out << "\n";
  }
}

void write_csv(const std::string& path, const TimeSeriesData& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  write_csv(out, data);
}

Json model_to_json(const VarModel& model) {
  Json doc;
  doc["format"] = "oir-var-model";
  doc["q"] = model.q;
  doc["p"] = model.p;
  doc["fs"] = model.fs;
  Json coeffs = Json::array();
  for (const auto& a : model.coeffs) coeffs.push_back(matrix_to_json(a));
  doc["coeffs"] = std::move(coeffs);
  doc["sigma_u"] = matrix_to_json(model.sigma_u);
  return doc;
}

VarModel model_from_json(const Json& doc) {
  try {
    VarModel m;
    m.q = doc.at("q").get<int>();
    m.p = doc.at("p").get<int>();
    m.fs = doc.at("fs").get<double>();
    if (m.q < 1 || m.p < 1) throw Error(ErrorCode::kParse, "model document needs q >= 1 and p >= 1");
    const Json& coeffs = doc.at("coeffs");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != m.p) {
      throw Error(ErrorCode::kParse, "model document must list p coefficient matrices");
    }
    for (int k = 0; k < m.p; ++k) m.coeffs.push_back(matrix_from_json(coeffs[k], m.q, m.q, "coeffs[" + std::to_string(k) + "]"));
    m.sigma_u = matrix_from_json(doc.at("sigma_u"), m.q, m.q, "sigma_u");
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed model document: ") + e.what());
  }
}

VarModel load_model(const std::string& path) {
  const Json doc = read_json(path);
  return model_from_json(doc.contains("model") ? doc.at("model") : doc);
}

BlockPartition partition_from_json(const Json& doc) {
  BlockPartition part;
  if (doc.is_object()) {
    for (const auto& [label, channels] : doc.items()) {
      part.labels.push_back(label);
      part.blocks.push_back(channels_from_json(channels, label));
    }
  } else if (doc.is_array()) {
    for (const auto& entry : doc) {
      const std::string fallback = "X" + std::to_string(part.blocks.size() + 1);
      if (entry.is_array()) {
        part.labels.push_back(fallback);
        part.blocks.push_back(channels_from_json(entry, fallback));
        continue;
      }
      if (!entry.is_object() || !entry.contains("channels")) throw Error(ErrorCode::kParse, "block entries need a 'channels' list");
      const std::string label = entry.value("label", fallback);
      part.labels.push_back(label);
      part.blocks.push_back(channels_from_json(entry.at("channels"), label));
    }
  } else {
    throw Error(ErrorCode::kParse, "blocks document must be an object or an array");
  }
  if (part.blocks.empty()) throw Error(ErrorCode::kParse, "blocks document is empty");
  return part;
}

Json partition_to_json(const BlockPartition& partition) {
  Json doc = Json::object();
  for (int b = 0; b < partition.size(); ++b) {
    Json channels = Json::array();
    for (int idx : partition.blocks[b]) channels.push_back(idx + 1);
    doc[partition.label(b)] = std::move(channels);
  }
  return doc;
}

BlockPartition parse_blocks(const std::string& spec) {
  if (std::filesystem::exists(spec)) return partition_from_json(read_json(spec));
  BlockPartition part;
  for (const auto& item : split(spec, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "inline block '" + item + "' must look like LABEL=1,2");
    const std::string label = trim(item.substr(0, eq));
    IndexSet channels;
    for (const auto& cell : split(item.substr(eq + 1), ',')) {
      double v = 0.0;
      if (!parse_double(cell, v) || v != std::floor(v)) throw Error(ErrorCode::kParse, "block " + label + " has a non-integer channel");
      if (v < 1.0) throw Error(ErrorCode::kParse, "block " + label + " channels are one-based");
      channels.push_back(static_cast<int>(v) - 1);
    }
    part.labels.push_back(label);
    part.blocks.push_back(std::move(channels));
  }
  if (part.blocks.empty()) throw Error(ErrorCode::kParse, "no blocks in '" + spec + "'");
  return part;
}

std::vector<NamedBand> bands_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "bands document must be an object of label: [lo, hi]");
  std::vector<NamedBand> bands;
  for (const auto& [label, range] : doc.items()) {
    if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
      throw Error(ErrorCode::kParse, "band " + label + " must be [lo, hi]");
    }
    const Band b{range[0].get<double>(), range[1].get<double>()};
    if (!(b.lo < b.hi)) throw Error(ErrorCode::kInvalidBand, "band " + label + " needs lo < hi");
    bands.push_back({label, b});
  }
  return bands;
}

std::vector<NamedBand> load_bands(const std::string& path) { return bands_from_json(read_json(path)); }

Json bands_to_json(const std::vector<NamedBand>& bands) {
  Json doc = Json::object();
  for (const auto& b : bands) doc[b.label] = {b.band.lo, b.band.hi};
  return doc;
}

void check_bands(const std::vector<NamedBand>& bands, double fs) {
  for (const auto& b : bands) {
    if (!(b.band.lo >= 0.0 && b.band.hi <= 0.5 * fs && b.band.lo < b.band.hi)) {
      std::ostringstream msg;
      msg << "band " << b.label << " [" << b.band.lo << ", " << b.band.hi << "] Hz is outside [0, " << 0.5 * fs << "]";
      throw Error(ErrorCode::kInvalidBand, msg.str());
    }
  }
}

std::vector<std::string> labels(const BlockPartition& partition, const std::vector<int>& blocks) {
  std::vector<std::string> out;
  for (int b : blocks) out.push_back(partition.label(b));
  return out;
}

Json mir_to_json(const MirDecomposition& mir) {
  auto one_based = [](const IndexSet& z) {
    Json out = Json::array();
    for (int i : z) out.push_back(i + 1);
    return out;
  };
  Json doc;
  doc["z1_channels"] = one_based(mir.z1);
  doc["z2_channels"] = one_based(mir.z2);
  doc["total"] = mir.total;
  doc["te_1to2"] = mir.te_1to2;
  doc["te_2to1"] = mir.te_2to1;
  doc["inst"] = mir.inst;
  return doc;
}

Json increment_to_json(const OirIncrement& inc, const BlockPartition& partition) {
  Json doc;
  doc["target"] = partition.label(inc.target);
  doc["multiplet"] = labels(partition, inc.multiplet);
  doc["total"] = inc.total;
  doc["to_target"] = inc.to_target;
  doc["from_target"] = inc.from_target;
  doc["inst"] = inc.inst;
  doc["merged_inst"] = inc.merged_inst;
  return doc;
}

Json oir_to_json(const OirResult& res, const BlockPartition& partition) {
  Json doc;
  doc["multiplet"] = labels(partition, res.multiplet);
  doc["omega"] = res.omega;
  Json bands = Json::object();
  for (const auto& [label, value] : res.band_table) bands[label] = value;
  doc["band_table"] = std::move(bands);
  Json incs = Json::array();
  for (const auto& inc : res.increments) incs.push_back(increment_to_json(inc, partition));
  doc["increments"] = std::move(incs);
  return doc;
}

void write_profiles_csv(std::ostream& out, const std::vector<const SpectralProfile*>& profiles) {
  if (profiles.empty()) throw Error(ErrorCode::kInvalidArgument, "no profiles to write");
  const auto& grid = profiles.front()->grid;
  out << "freq_hz";
  for (const auto* p : profiles) {
    if (p->values.size() != grid.freqs_hz.size()) throw Error(ErrorCode::kInvalidArgument, "profiles live on different grids");
    out << "," << p->label;
  }
  out << "\n" << std::setprecision(17);
  for (int i = 0; i < grid.size(); ++i) {
    out << grid.freqs_hz[i];
    for (const auto* p : profiles) out << "," << p->values[i];
    out << "\n";
  }
}

void write_profiles_csv(const std::string& path, const std::vector<const SpectralProfile*>& profiles) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  write_profiles_csv(out, profiles);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace oir::io
