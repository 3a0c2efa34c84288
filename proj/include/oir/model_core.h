#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oir/error.h"

namespace oir {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Zero-based channel indices.
using IndexSet = std::vector<int>;

/// Multichannel record: rows are time samples, columns are channels.
struct TimeSeriesData {
  Mat samples;
  double fs = 1.0;
  std::vector<std::string> channel_names;

  int length() const { return static_cast<int>(samples.rows()); }
  int channels() const { return static_cast<int>(samples.cols()); }

  /// Throws kInvalidArgument unless L >= 2, Q >= 1, fs > 0, all finite and
  /// one name per channel.
  void validate() const;
};

/// Y_n = sum_k A_k Y_{n-k} + U_n, cov(U_n) = sigma_u.
struct VarModel {
  int q = 0;
  int p = 0;
  std::vector<Mat> coeffs;
  Mat sigma_u;
  double fs = 1.0;

  /// Shape checks, p >= 1 and SPD innovation covariance. Stability is
  /// checked separately by check_stable().
  void validate() const;
};

enum class Criterion { kAic, kBic };

/// Ordered list of disjoint channel groups. Need not cover every channel.
struct BlockPartition {
  std::vector<IndexSet> blocks;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(blocks.size()); }
  std::string label(int block) const;

  /// Throws kInvalidPartition on empty/overlapping/out-of-range blocks.
  void validate(int q) const;

  /// Channels of the listed blocks, concatenated in the order given.
  IndexSet flatten(const std::vector<int>& block_ids) const;

  /// Block index for a label, or for "X<k>" / "<k>" one-based shorthands.
  int find(const std::string& label) const;

  /// One scalar block per channel, labelled X1..XQ.
  static BlockPartition singletons(int q);
};

/// Stability margin: models with spectral radius >= 1 - kStabilityMargin are
/// rejected before any spectral work.
inline constexpr double kStabilityMargin = 1e-8;

/// Ordinary least squares VAR fit without intercept. Residual covariance is
/// divided by the number of regression rows (L - p).
VarModel fit_var(const TimeSeriesData& data, int p);

/// Order in 1..max_p minimizing AIC or BIC over a regression window fixed at
/// max_p. Ties resolve to the smaller order.
int select_order(const TimeSeriesData& data, int max_p, Criterion criterion);

/// Criterion values for p = 1..max_p (index 0 holds p = 1). Orders whose fit
/// fails are reported as +infinity.
std::vector<double> order_criteria(const TimeSeriesData& data, int max_p,
                                   Criterion criterion);

Mat companion(const VarModel& model);

double spectral_radius(const VarModel& model);
double spectral_radius(const Mat& square);

/// Throws kUnstableModel when spectral_radius >= 1 - kStabilityMargin.
void check_stable(const VarModel& model);

/// Cholesky log-determinant. A non-positive pivot throws Error(code).
double logdet_spd(const Mat& m, ErrorCode code);

}  // namespace oir
