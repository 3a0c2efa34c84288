#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "oir/interaction.h"

namespace oir::io {

using Json = nlohmann::ordered_json;

/// Per-channel statistics removed on load.
struct Normalization {
  std::vector<double> means;
  std::vector<double> stds;
};

struct LoadedSeries {
  TimeSeriesData data;
  Normalization normalization;
};

/// Reads the time-series CSV format:
///
///   # fs=<Hz>
///   name1,name2,...
///   v11,v12,...
///
/// Every channel is shifted to zero mean and scaled to unit (n - 1) sample
/// variance. Errors carry one-based line numbers.
LoadedSeries parse_csv(std::istream& in, const std::string& source = "<input>");
LoadedSeries load_csv(const std::string& path);

void write_csv(std::ostream& out, const TimeSeriesData& data);
void write_csv(const std::string& path, const TimeSeriesData& data);

Json model_to_json(const VarModel& model);
VarModel model_from_json(const Json& doc);
VarModel load_model(const std::string& path);

/// Blocks from {"X1": [1, 2], "X2": [3]} or [{"label": "X1", "channels": [1, 2]}, ...],
/// one-based channel indices, declaration order kept.
BlockPartition partition_from_json(const Json& doc);
Json partition_to_json(const BlockPartition& partition);

/// Either a path to a blocks document or an inline "X1=1,2;X2=3" list.
BlockPartition parse_blocks(const std::string& spec);

/// {"alpha": [8, 12], ...}, declaration order kept. Checks lo < hi.
std::vector<NamedBand> bands_from_json(const Json& doc);
std::vector<NamedBand> load_bands(const std::string& path);
Json bands_to_json(const std::vector<NamedBand>& bands);

/// Throws kInvalidBand unless every band fits in [0, fs/2].
void check_bands(const std::vector<NamedBand>& bands, double fs);

std::vector<std::string> labels(const BlockPartition& partition, const std::vector<int>& blocks);

Json mir_to_json(const MirDecomposition& mir);
Json increment_to_json(const OirIncrement& inc, const BlockPartition& partition);
Json oir_to_json(const OirResult& res, const BlockPartition& partition);

/// Frequency column in Hz followed by one column per profile.
void write_profiles_csv(std::ostream& out, const std::vector<const SpectralProfile*>& profiles);
void write_profiles_csv(const std::string& path, const std::vector<const SpectralProfile*>& profiles);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& doc);

}  // namespace oir::io
