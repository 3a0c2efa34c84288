#include "oir/model_core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace oir {
namespace {

struct WindowFit {
  Mat coeffs;    // pQ x Q, stacked A_k^T
  Mat residual;  // rows x Q
};

// Regress rows first..L-1 of the series on their p predecessors.
WindowFit fit_window(const Mat& y, int p, int first) {
  const int q = static_cast<int>(y.cols());
  const int rows = static_cast<int>(y.rows()) - first;
  Mat design(rows, p * q);
  for (int k = 0; k < p; ++k) {
    design.middleCols(k * q, q) = y.middleRows(first - k - 1, rows);
  }
  const Mat target = y.bottomRows(rows);

  Eigen::ColPivHouseholderQR<Mat> qr(design);
  if (qr.rank() < p * q) {
    std::ostringstream msg;
    msg << "regressor matrix is rank deficient (rank " << qr.rank() << " < "
        << p * q << ")";
    throw Error(ErrorCode::kSingularDesign, msg.str());
  }
  WindowFit fit;
  fit.coeffs = qr.solve(target);
  fit.residual = target - design * fit.coeffs;
  return fit;
}

void require_rows(const TimeSeriesData& data, int p) {
  const int q = data.channels();
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "model order must be >= 1");
  if (data.length() <= p * q + p) {
    std::ostringstream msg;
    msg << "need more than " << p * q + p << " samples to fit order " << p
        << " with " << q << " channels, got " << data.length();
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

}  // namespace

void TimeSeriesData::validate() const {
  if (samples.rows() < 2) throw Error(ErrorCode::kInvalidArgument, "time series needs at least 2 samples");
  if (samples.cols() < 1) throw Error(ErrorCode::kInvalidArgument, "time series needs at least 1 channel");
  if (!(fs > 0.0) || !std::isfinite(fs)) throw Error(ErrorCode::kInvalidArgument, "sampling frequency must be positive");
  if (!samples.allFinite()) throw Error(ErrorCode::kInvalidArgument, "time series contains non-finite values");
  if (static_cast<Eigen::Index>(channel_names.size()) != samples.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "channel name count does not match channel count");
  }
}

void VarModel::validate() const {
  if (q < 1) throw Error(ErrorCode::kInvalidArgument, "model needs q >= 1");
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "model needs p >= 1");
  if (static_cast<int>(coeffs.size()) != p) throw Error(ErrorCode::kInvalidArgument, "coefficient count does not match order");
  for (const auto& a : coeffs) {
    if (a.rows() != q || a.cols() != q) throw Error(ErrorCode::kInvalidArgument, "coefficient matrix has wrong shape");
    if (!a.allFinite()) throw Error(ErrorCode::kInvalidArgument, "coefficient matrix has non-finite entries");
  }
  if (sigma_u.rows() != q || sigma_u.cols() != q) throw Error(ErrorCode::kInvalidArgument, "sigma_u has wrong shape");
  if (!(fs > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sampling frequency must be positive");
  if ((sigma_u - sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + sigma_u.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kDegenerateInnovations, "sigma_u is not symmetric");
  }
  if (Eigen::LLT<Mat>(sigma_u).info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateInnovations, "sigma_u is not positive definite");
  }
}

std::string BlockPartition::label(int block) const {
  if (block >= 0 && block < static_cast<int>(labels.size())) return labels[block];
  return "X" + std::to_string(block + 1);
}

void BlockPartition::validate(int q) const {
  if (blocks.empty()) throw Error(ErrorCode::kInvalidPartition, "partition has no blocks");
  if (!labels.empty() && labels.size() != blocks.size()) {
    throw Error(ErrorCode::kInvalidPartition, "label count does not match block count");
  }
  std::set<int> seen;
  for (int b = 0; b < size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::kInvalidPartition, "block " + label(b) + " is empty");
    for (int idx : blocks[b]) {
      if (idx < 0 || idx >= q) {
        throw Error(ErrorCode::kInvalidPartition, "block " + label(b) + " references channel " +
                                                      std::to_string(idx + 1) + " outside 1.." + std::to_string(q));
      }
      if (!seen.insert(idx).second) {
        throw Error(ErrorCode::kInvalidPartition, "channel " + std::to_string(idx + 1) + " appears in more than one block");
      }
    }
  }
}

IndexSet BlockPartition::flatten(const std::vector<int>& block_ids) const {
  IndexSet out;
  for (int b : block_ids) {
    if (b < 0 || b >= size()) throw Error(ErrorCode::kInvalidPartition, "block id out of range");
    out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  }
  return out;
}

int BlockPartition::find(const std::string& name) const {
  for (int b = 0; b < size(); ++b) {
    if (label(b) == name) return b;
  }
  std::string digits = name;
  if (!digits.empty() && (digits[0] == 'X' || digits[0] == 'x')) digits.erase(0, 1);
  if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    const int b = std::stoi(digits) - 1;
    if (b >= 0 && b < size()) return b;
  }
  throw Error(ErrorCode::kInvalidPartition, "unknown block '" + name + "'");
}

BlockPartition BlockPartition::singletons(int q) {
  BlockPartition part;
  for (int i = 0; i < q; ++i) {
    part.blocks.push_back({i});
    part.labels.push_back("X" + std::to_string(i + 1));
  }
  return part;
}

double logdet_spd(const Mat& m, ErrorCode code) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw Error(code, "matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

VarModel fit_var(const TimeSeriesData& data, int p) {
  data.validate();
  require_rows(data, p);
  const int q = data.channels();
  const WindowFit fit = fit_window(data.samples, p, p);

  VarModel model;
  model.q = q;
  model.p = p;
  model.fs = data.fs;
  for (int k = 0; k < p; ++k) {
    model.coeffs.push_back(fit.coeffs.middleRows(k * q, q).transpose());
  }
  const double rows = static_cast<double>(data.length() - p);
  model.sigma_u = fit.residual.transpose() * fit.residual / rows;
  model.sigma_u = 0.5 * (model.sigma_u + model.sigma_u.transpose()).eval();
  if (Eigen::LLT<Mat>(model.sigma_u).info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateInnovations, "residual covariance is not positive definite");
  }
  return model;
}

std::vector<double> order_criteria(const TimeSeriesData& data, int max_p, Criterion criterion) {
  data.validate();
  if (max_p < 1) throw Error(ErrorCode::kInvalidArgument, "max order must be >= 1");
  require_rows(data, max_p);
  const int q = data.channels();
  const double l_eff = static_cast<double>(data.length() - max_p);

  std::vector<double> values;
  for (int p = 1; p <= max_p; ++p) {
    double value = std::numeric_limits<double>::infinity();
    try {
      const WindowFit fit = fit_window(data.samples, p, max_p);
      const Mat sigma = fit.residual.transpose() * fit.residual / l_eff;
      const double penalty = criterion == Criterion::kAic ? 2.0 * p * q * q / l_eff
                                                           : p * q * q * std::log(l_eff) / l_eff;
      value = logdet_spd(0.5 * (sigma + sigma.transpose()), ErrorCode::kDegenerateInnovations) + penalty;
    } catch (const Error&) {
    }
    values.push_back(value);
  }
  return values;
}

int select_order(const TimeSeriesData& data, int max_p, Criterion criterion) {
  const std::vector<double> values = order_criteria(data, max_p, criterion);
  const auto best = std::min_element(values.begin(), values.end());
  if (!std::isfinite(*best)) throw Error(ErrorCode::kNoValidOrder, "no candidate order could be fitted");
  return static_cast<int>(best - values.begin()) + 1;
}

Mat companion(const VarModel& model) {
  const int q = model.q;
  const int n = model.p * q;
  Mat a = Mat::Zero(n, n);
  for (int k = 0; k < model.p; ++k) a.block(0, k * q, q, q) = model.coeffs[k];
  if (model.p > 1) a.bottomLeftCorner(n - q, n - q).setIdentity();
  return a;
}

double spectral_radius(const Mat& square) {
  if (square.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(square, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const VarModel& model) { return spectral_radius(companion(model)); }

void check_stable(const VarModel& model) {
  const double radius = spectral_radius(model);
  if (!(radius < 1.0 - kStabilityMargin)) {
    std::ostringstream msg;
    msg << "VAR model is not stable (spectral radius " << radius << ")";
    throw Error(ErrorCode::kUnstableModel, msg.str());
  }
}

}  // namespace oir
