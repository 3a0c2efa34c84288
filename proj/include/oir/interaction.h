#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oir/spectral.h"

namespace oir {

struct MirProfiles {
  SpectralProfile total;
  SpectralProfile te_1to2;
  SpectralProfile te_2to1;
  SpectralProfile inst;
};

/// I(Z1;Z2) = T(1->2) + T(2->1) + I(Z1 o Z2), all in nats.
struct MirDecomposition {
  IndexSet z1;
  IndexSet z2;
  double total = 0.0;
  double te_1to2 = 0.0;
  double te_2to1 = 0.0;
  double inst = 0.0;
  /// Absent for the covariance oracle.
  std::optional<MirProfiles> profiles;
};

struct IncrementProfiles {
  SpectralProfile total;
  SpectralProfile to_target;
  SpectralProfile from_target;
  SpectralProfile inst;
};

/// Change of the O-information rate when block `target` joins the rest of
/// `multiplet`, split into its directed and instantaneous parts.
struct OirIncrement {
  int target = 0;
  std::vector<int> multiplet;
  double total = 0.0;
  double to_target = 0.0;
  double from_target = 0.0;
  double inst = 0.0;
  bool merged_inst = false;
  IncrementProfiles profiles;
};

struct NamedBand {
  std::string label;
  Band band;
};

struct OirResult {
  std::vector<int> multiplet;
  double omega = 0.0;
  SpectralProfile nu;
  std::vector<OirIncrement> increments;
  std::vector<std::pair<std::string, double>> band_table;
};

/// Memoizes Riccati reductions (per ordered channel list) and spectral MIR
/// decompositions for one state-space model. Safe for concurrent use.
class InteractionCache {
 public:
  explicit InteractionCache(StateSpaceModel ss, DareOptions options = {});

  const StateSpaceModel& model() const { return ss_; }

  std::shared_ptr<const ReducedStateSpaceModel> reduction(const IndexSet& r);

  std::shared_ptr<const MirDecomposition> find_mir(const IndexSet& z1, const IndexSet& z2, const FrequencyGrid& grid);
  void store_mir(const FrequencyGrid& grid, std::shared_ptr<const MirDecomposition> mir);

  std::size_t reductions_computed() const;

 private:
  using MirKey = std::tuple<IndexSet, IndexSet, int, double>;

  StateSpaceModel ss_;
  DareOptions options_;
  mutable std::mutex mutex_;
  std::map<IndexSet, std::shared_ptr<const ReducedStateSpaceModel>> reductions_;
  std::map<MirKey, std::shared_ptr<const MirDecomposition>> mirs_;
};

/// Spectral route: reduce to z1 then z2, evaluate the four log-spectra and
/// integrate them over the whole axis.
MirDecomposition mir(InteractionCache& cache, const IndexSet& z1, const IndexSet& z2, const FrequencyGrid& grid);
MirDecomposition mir(const StateSpaceModel& ss, const IndexSet& z1, const IndexSet& z2, const FrequencyGrid& grid);

/// Covariance route: three reductions (z1, z2, joint) and log-determinant
/// ratios of their innovation covariances. No profiles.
MirDecomposition mir_oracle(InteractionCache& cache, const IndexSet& z1, const IndexSet& z2);
MirDecomposition mir_oracle(const StateSpaceModel& ss, const IndexSet& z1, const IndexSet& z2);

/// Combines the MIR between the target block and the rest of the multiplet
/// (weight 2 - N) with the MIRs between the target and each rest-minus-one
/// subset (weight +1). With merge_inst the instantaneous part is folded into
/// to_target.
OirIncrement oir_increment(InteractionCache& cache, const BlockPartition& partition, const std::vector<int>& multiplet,
                           int target, const FrequencyGrid& grid, bool merge_inst = false);
OirIncrement oir_increment(const StateSpaceModel& ss, const BlockPartition& partition,
                           const std::vector<int>& multiplet, int target, const FrequencyGrid& grid,
                           bool merge_inst = false);

/// Recursion from the first two blocks (OIR 0), adding the remaining blocks
/// in the order listed. Band integrals of nu fill band_table.
OirResult oir(InteractionCache& cache, const BlockPartition& partition, const std::vector<int>& multiplet,
              const FrequencyGrid& grid, const std::vector<NamedBand>& bands = {}, bool merge_inst = false);
OirResult oir(const StateSpaceModel& ss, const BlockPartition& partition, const std::vector<int>& multiplet,
              const FrequencyGrid& grid, const std::vector<NamedBand>& bands = {}, bool merge_inst = false);

struct ScanOptions {
  bool merge_inst = false;
  int threads = 1;
};

struct ScanRecord {
  std::vector<int> multiplet;
  std::optional<OirResult> result;
  std::optional<ErrorCode> error;
  std::string message;
};

/// All block subsets of each requested size, lexicographic within a size,
/// sizes in increasing order. A failing multiplet is reported in its record
/// and does not stop the scan.
std::vector<ScanRecord> oir_scan(const StateSpaceModel& ss, const BlockPartition& partition,
                                 const std::vector<int>& orders, const FrequencyGrid& grid,
                                 const std::vector<NamedBand>& bands = {}, const ScanOptions& options = {});

/// Lexicographic size-n subsets of {0..m-1}.
std::vector<std::vector<int>> combinations(int m, int n);

/// I(Xi;Xj) + I(Xk;Xj) - I((Xi,Xk);Xj) for triplet (i, k, j).
double interaction_info_check(InteractionCache& cache, const BlockPartition& partition,
                              const std::vector<int>& triplet, const FrequencyGrid& grid);
double interaction_info_check(const StateSpaceModel& ss, const BlockPartition& partition,
                              const std::vector<int>& triplet, const FrequencyGrid& grid);

}  // namespace oir
