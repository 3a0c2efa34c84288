#include "oir/interaction.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

namespace oir {
namespace {

void check_pair(int q, const IndexSet& z1, const IndexSet& z2) {
  if (z1.empty() || z2.empty()) throw Error(ErrorCode::kInvalidArgument, "MIR blocks must be nonempty");
  std::set<int> seen;
  for (const IndexSet* z : {&z1, &z2}) {
    for (int idx : *z) {
      if (idx < 0 || idx >= q) throw Error(ErrorCode::kInvalidArgument, "MIR channel index outside 0..Q-1");
      if (!seen.insert(idx).second) throw Error(ErrorCode::kInvalidArgument, "MIR blocks must be disjoint");
    }
  }
}

IndexSet concat(const IndexSet& a, const IndexSet& b) {
  IndexSet r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Mat block(const Mat& m, int off, int len) { return m.block(off, off, len, len); }

void check_multiplet(const BlockPartition& partition, int q, const std::vector<int>& multiplet) {
  partition.validate(q);
  if (multiplet.size() < 3) {
    throw Error(ErrorCode::kMultipletTooSmall, "multiplet needs at least 3 blocks, got " + std::to_string(multiplet.size()));
  }
  std::set<int> seen;
  for (int b : multiplet) {
    if (b < 0 || b >= partition.size()) throw Error(ErrorCode::kInvalidPartition, "multiplet block id out of range");
    if (!seen.insert(b).second) throw Error(ErrorCode::kInvalidPartition, "multiplet repeats block " + partition.label(b));
  }
}

// Rest blocks go in declaration order so the channel flattening is fixed.
std::vector<int> sorted_without(const std::vector<int>& blocks, int a, int b = -1) {
  std::vector<int> out;
  for (int x : blocks) {
    if (x != a && x != b) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

InteractionCache::InteractionCache(StateSpaceModel ss, DareOptions options)
    : ss_(std::move(ss)), options_(options) {}

std::shared_ptr<const ReducedStateSpaceModel> InteractionCache::reduction(const IndexSet& r) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = reductions_.find(r); it != reductions_.end()) return it->second;
  }
  auto computed = std::make_shared<const ReducedStateSpaceModel>(reduce(ss_, r, options_));
  std::lock_guard lock(mutex_);
  return reductions_.emplace(r, std::move(computed)).first->second;
}

std::shared_ptr<const MirDecomposition> InteractionCache::find_mir(const IndexSet& z1, const IndexSet& z2,
                                                                   const FrequencyGrid& grid) {
  std::lock_guard lock(mutex_);
  auto it = mirs_.find(MirKey{z1, z2, grid.size(), grid.fs});
  return it == mirs_.end() ? nullptr : it->second;
}

void InteractionCache::store_mir(const FrequencyGrid& grid, std::shared_ptr<const MirDecomposition> mir) {
  std::lock_guard lock(mutex_);
  mirs_.emplace(MirKey{mir->z1, mir->z2, grid.size(), grid.fs}, std::move(mir));
}

std::size_t InteractionCache::reductions_computed() const {
  std::lock_guard lock(mutex_);
  return reductions_.size();
}

MirDecomposition mir(InteractionCache& cache, const IndexSet& z1, const IndexSet& z2, const FrequencyGrid& grid) {
  check_pair(cache.model().outputs(), z1, z2);
  if (auto hit = cache.find_mir(z1, z2, grid)) return *hit;

  const auto reduced = cache.reduction(concat(z1, z2));
  const SpectralMatrices sm = psd(transfer_function(*reduced, grid, static_cast<int>(z1.size())), reduced->v_t);

  MirProfiles profiles{
      coupling_spectrum(sm),
      causal_spectrum(sm, reduced->v_t, Direction::kOneToTwo),
      causal_spectrum(sm, reduced->v_t, Direction::kTwoToOne),
      instantaneous_spectrum(sm, reduced->v_t),
  };
  MirDecomposition out;
  out.z1 = z1;
  out.z2 = z2;
  out.total = integrate(profiles.total);
  out.te_1to2 = integrate(profiles.te_1to2);
  out.te_2to1 = integrate(profiles.te_2to1);
  out.inst = integrate(profiles.inst);
  out.profiles = std::move(profiles);
  cache.store_mir(grid, std::make_shared<const MirDecomposition>(out));
  return out;
}

MirDecomposition mir(const StateSpaceModel& ss, const IndexSet& z1, const IndexSet& z2, const FrequencyGrid& grid) {
  InteractionCache cache(ss);
  return mir(cache, z1, z2, grid);
}

MirDecomposition mir_oracle(InteractionCache& cache, const IndexSet& z1, const IndexSet& z2) {
  check_pair(cache.model().outputs(), z1, z2);
  const ErrorCode code = ErrorCode::kDegenerateReduction;
  const double ld_v1 = logdet_spd(cache.reduction(z1)->v_t, code);
  const double ld_v2 = logdet_spd(cache.reduction(z2)->v_t, code);
  const Mat& w = cache.reduction(concat(z1, z2))->v_t;
  const int r1 = static_cast<int>(z1.size());
  const int r2 = static_cast<int>(z2.size());
  const double ld_w = logdet_spd(w, code);
  const double ld_w11 = logdet_spd(block(w, 0, r1), code);
  const double ld_w22 = logdet_spd(block(w, r1, r2), code);

  MirDecomposition out;
  out.z1 = z1;
  out.z2 = z2;
  out.total = 0.5 * (ld_v1 + ld_v2 - ld_w);
  out.te_2to1 = 0.5 * (ld_v1 - ld_w11);
  out.te_1to2 = 0.5 * (ld_v2 - ld_w22);
  out.inst = 0.5 * (ld_w11 + ld_w22 - ld_w);
  return out;
}

MirDecomposition mir_oracle(const StateSpaceModel& ss, const IndexSet& z1, const IndexSet& z2) {
  InteractionCache cache(ss);
  return mir_oracle(cache, z1, z2);
}

OirIncrement oir_increment(InteractionCache& cache, const BlockPartition& partition, const std::vector<int>& multiplet,
                           int target, const FrequencyGrid& grid, bool merge_inst) {
  check_multiplet(partition, cache.model().outputs(), multiplet);
  if (std::find(multiplet.begin(), multiplet.end(), target) == multiplet.end()) {
    throw Error(ErrorCode::kInvalidArgument, "target block " + partition.label(target) + " is not in the multiplet");
  }
  const int n = static_cast<int>(multiplet.size());
  const IndexSet target_channels = partition.flatten({target});

  OirIncrement inc;
  inc.target = target;
  inc.multiplet = multiplet;
  inc.profiles = {SpectralProfile::zeros(grid, "delta"), SpectralProfile::zeros(grid, "delta_to_target"),
                  SpectralProfile::zeros(grid, "delta_from_target"), SpectralProfile::zeros(grid, "delta_inst")};

  auto accumulate = [&](const std::vector<int>& others, double weight) {
    const MirDecomposition m = mir(cache, target_channels, partition.flatten(others), grid);
    inc.total += weight * m.total;
    inc.to_target += weight * m.te_2to1;
    inc.from_target += weight * m.te_1to2;
    inc.inst += weight * m.inst;
    inc.profiles.total.add_scaled(m.profiles->total, weight);
    inc.profiles.to_target.add_scaled(m.profiles->te_2to1, weight);
    inc.profiles.from_target.add_scaled(m.profiles->te_1to2, weight);
    inc.profiles.inst.add_scaled(m.profiles->inst, weight);
  };

  accumulate(sorted_without(multiplet, target), 2.0 - n);
  for (int m : multiplet) {
    if (m != target) accumulate(sorted_without(multiplet, target, m), 1.0);
  }

  if (merge_inst) {
    inc.to_target += inc.inst;
    inc.inst = 0.0;
    inc.profiles.to_target.add_scaled(inc.profiles.inst, 1.0);
    std::fill(inc.profiles.inst.values.begin(), inc.profiles.inst.values.end(), 0.0);
    inc.merged_inst = true;
  }
  return inc;
}

OirIncrement oir_increment(const StateSpaceModel& ss, const BlockPartition& partition,
                           const std::vector<int>& multiplet, int target, const FrequencyGrid& grid,
                           bool merge_inst) {
  InteractionCache cache(ss);
  return oir_increment(cache, partition, multiplet, target, grid, merge_inst);
}

OirResult oir(InteractionCache& cache, const BlockPartition& partition, const std::vector<int>& multiplet,
              const FrequencyGrid& grid, const std::vector<NamedBand>& bands, bool merge_inst) {
  check_multiplet(partition, cache.model().outputs(), multiplet);
  OirResult res;
  res.multiplet = multiplet;
  res.nu = SpectralProfile::zeros(grid, "nu");
  for (std::size_t k = 2; k < multiplet.size(); ++k) {
    const std::vector<int> sub(multiplet.begin(), multiplet.begin() + k + 1);
    OirIncrement inc = oir_increment(cache, partition, sub, multiplet[k], grid, merge_inst);
    res.omega += inc.total;
    res.nu.add_scaled(inc.profiles.total, 1.0);
    res.increments.push_back(std::move(inc));
  }
  for (const auto& b : bands) res.band_table.emplace_back(b.label, integrate(res.nu, b.band));
  return res;
}

OirResult oir(const StateSpaceModel& ss, const BlockPartition& partition, const std::vector<int>& multiplet,
              const FrequencyGrid& grid, const std::vector<NamedBand>& bands, bool merge_inst) {
  InteractionCache cache(ss);
  return oir(cache, partition, multiplet, grid, bands, merge_inst);
}

std::vector<std::vector<int>> combinations(int m, int n) {
  std::vector<std::vector<int>> out;
  if (n < 0 || n > m) return out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<ScanRecord> oir_scan(const StateSpaceModel& ss, const BlockPartition& partition,
                                 const std::vector<int>& orders, const FrequencyGrid& grid,
                                 const std::vector<NamedBand>& bands, const ScanOptions& options) {
  partition.validate(ss.outputs());
  std::vector<int> sizes = orders;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<ScanRecord> records;
  for (int n : sizes) {
    if (n < 3 || n > partition.size()) {
      throw Error(ErrorCode::kMultipletTooSmall, "scan order " + std::to_string(n) + " outside 3.." +
                                                     std::to_string(partition.size()));
    }
    for (auto& combo : combinations(partition.size(), n)) records.push_back({std::move(combo), {}, {}, {}});
  }

  InteractionCache cache(ss);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      ScanRecord& rec = records[i];
      try {
        rec.result = oir(cache, partition, rec.multiplet, grid, bands, options.merge_inst);
      } catch (const Error& e) {
        rec.error = e.code();
        rec.message = e.what();
      }
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

double interaction_info_check(InteractionCache& cache, const BlockPartition& partition,
                              const std::vector<int>& triplet, const FrequencyGrid& grid) {
  if (triplet.size() != 3) throw Error(ErrorCode::kInvalidArgument, "interaction information needs exactly 3 blocks");
  check_multiplet(partition, cache.model().outputs(), triplet);
  const IndexSet xi = partition.flatten({triplet[0]});
  const IndexSet xk = partition.flatten({triplet[1]});
  const IndexSet xj = partition.flatten({triplet[2]});
  const IndexSet joint = partition.flatten(sorted_without(triplet, triplet[2]));
  return mir(cache, xi, xj, grid).total + mir(cache, xk, xj, grid).total - mir(cache, joint, xj, grid).total;
}

double interaction_info_check(const StateSpaceModel& ss, const BlockPartition& partition,
                              const std::vector<int>& triplet, const FrequencyGrid& grid) {
  InteractionCache cache(ss);
  return interaction_info_check(cache, partition, triplet, grid);
}

}  // namespace oir
