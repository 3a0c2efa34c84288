#include "oir/simulate.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oir {

std::pair<double, double> ar2_coeffs(const PolePair& pole) {
  if (!(pole.rho >= 0.0 && pole.rho < 1.0)) throw Error(ErrorCode::kInvalidArgument, "pole modulus must be in [0, 1)");
  if (!(pole.fs > 0.0) || pole.f_hz < 0.0 || pole.f_hz > 0.5 * pole.fs) {
    throw Error(ErrorCode::kInvalidArgument, "pole frequency must be in [0, fs/2]");
  }
  const double phase = 2.0 * std::numbers::pi * pole.f_hz / pole.fs;
  return {2.0 * pole.rho * std::cos(phase), -pole.rho * pole.rho};
}

std::vector<double> compose_poles(const std::vector<PolePair>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one pole pair");
  std::vector<double> poly{1.0};
  for (const auto& pair : pairs) {
    const auto [a1, a2] = ar2_coeffs(pair);
    const double factor[3] = {1.0, -a1, -a2};
    std::vector<double> next(poly.size() + 2, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      for (int j = 0; j < 3; ++j) next[i + j] += poly[i] * factor[j];
    }
    poly = std::move(next);
  }
  std::vector<double> coeffs;
  for (std::size_t i = 1; i < poly.size(); ++i) coeffs.push_back(-poly[i]);
  return coeffs;
}

double fir_magnitude(const std::vector<double>& taps, double f_hz, double fs) {
  const double w = 2.0 * std::numbers::pi * f_hz / fs;
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) sum += taps[k] * std::polar(1.0, -w * static_cast<double>(k));
  return std::abs(sum);
}

std::vector<double> fir_design(const FirSpec& spec) {
  if (spec.order < 1) throw Error(ErrorCode::kInvalidArgument, "FIR order must be >= 1");
  if (!(spec.fs > 0.0) || !(spec.cutoff_hz > 0.0) || !(spec.cutoff_hz < 0.5 * spec.fs)) {
    throw Error(ErrorCode::kInvalidArgument, "FIR cutoff must lie strictly inside (0, fs/2)");
  }
  if (spec.kind == FirKind::kHighpass && spec.order % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "highpass FIR needs an even order");
  }
  const int n = spec.order + 1;
  const double fc = spec.cutoff_hz / spec.fs;  // cycles per sample
  const double mid = 0.5 * spec.order;
  std::vector<double> taps(n);
  for (int k = 0; k <= spec.order / 2; ++k) {
    const double t = k - mid;
    const double sinc = t == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * t) / (std::numbers::pi * t);
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / spec.order);
    taps[k] = taps[spec.order - k] = sinc * window;
  }
  double gain = 0.0;
  if (spec.kind == FirKind::kLowpass) {
    for (double b : taps) gain += b;
  } else {
    for (double& b : taps) b = -b;
    taps[spec.order / 2] += 1.0;
    for (int k = 0; k < n; ++k) gain += (k % 2 == 0 ? 1.0 : -1.0) * taps[k];
  }
  for (double& b : taps) b /= gain;
  for (int k = 0; k < n / 2; ++k) taps[spec.order - k] = taps[k];
  return taps;
}

Benchmark build_sim1(const Sim1Options& options) {
  constexpr double fs = 1.0;
  constexpr int q = 3;
  constexpr int fir_order = 20;
  const int p = fir_order + 1;

  std::vector<double> lowpass = fir_design({fir_order, 0.2, FirKind::kLowpass, fs});
  std::vector<double> highpass = fir_design({fir_order, 0.2, FirKind::kHighpass, fs});
  if (options.swap_filters) std::swap(lowpass, highpass);

  VarModel m;
  m.q = q;
  m.p = p;
  m.fs = fs;
  m.coeffs.assign(p, Mat::Zero(q, q));
  const auto a11 = compose_poles({{0.85, 0.1, fs}, {0.85, 0.35, fs}});
  for (std::size_t k = 0; k < a11.size(); ++k) m.coeffs[k](0, 0) = a11[k];
  const auto [b1, b2] = ar2_coeffs({0.7, 0.1, fs});
  m.coeffs[0](1, 1) = b1;
  m.coeffs[1](1, 1) = b2;
  for (int k = 0; k < p; ++k) {
    m.coeffs[k](1, 0) = 0.4 * highpass[k];
    m.coeffs[k](2, 0) = 0.6 * lowpass[k];
  }
  m.coeffs[0](2, 1) = 1.0;
  m.sigma_u = (Vec(q) << 2.0, 0.5, 2.0).finished().asDiagonal();
  return {std::move(m), BlockPartition::singletons(q)};
}

Benchmark build_sim2() {
  constexpr double fs = 100.0;
  constexpr int q = 10;
  VarModel m;
  m.q = q;
  m.p = 2;
  m.fs = fs;
  m.coeffs.assign(2, Mat::Zero(q, q));
  // One-based (target, source, lag) to match the usual equation layout.
  auto set = [&m](int target, int source, int lag, double value) { m.coeffs[lag - 1](target - 1, source - 1) = value; };

  const auto [a1, a2] = ar2_coeffs({0.9, 10.0, fs});
  const auto [b1, b2] = ar2_coeffs({0.8, 25.0, fs});
  set(1, 1, 1, a1);
  set(1, 1, 2, a2);
  set(2, 1, 1, 0.5);
  set(3, 2, 1, 0.5);
  set(4, 1, 2, -0.5);
  set(4, 3, 1, 0.2);
  set(4, 10, 1, 0.5);
  set(5, 5, 1, a1);
  set(5, 5, 2, a2);
  set(6, 7, 2, 0.3);
  set(7, 7, 1, a1);
  set(7, 7, 2, a2);
  set(7, 6, 1, 0.3);
  set(8, 8, 1, b1);
  set(8, 8, 2, b2);
  set(8, 2, 2, 0.4);
  set(8, 3, 1, 0.3);
  set(8, 5, 1, -0.4);
  set(8, 7, 1, 0.3);
  set(9, 8, 1, 0.7);
  set(9, 10, 2, -0.2);
  set(10, 9, 1, 0.4);
  m.sigma_u = Mat::Identity(q, q);

  BlockPartition part;
  part.blocks = {{0, 1, 2, 3}, {4}, {5, 6}, {7}, {8, 9}};
  part.labels = {"X1", "X2", "X3", "X4", "X5"};
  return {std::move(m), std::move(part)};
}

TimeSeriesData realize(const VarModel& model, int n_samples, std::uint64_t seed, int burn_in) {
  model.validate();
  check_stable(model);
  if (n_samples < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  if (burn_in < 0) throw Error(ErrorCode::kInvalidArgument, "burn-in must be nonnegative");

  const int q = model.q;
  const int p = model.p;
  const int total = n_samples + burn_in;
  const Mat chol = Eigen::LLT<Mat>(model.sigma_u).matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Mat y = Mat::Zero(total, q);
  Vec draw(q);
  for (int n = 0; n < total; ++n) {
    for (int i = 0; i < q; ++i) draw(i) = normal(rng);
    Vec value = chol * draw;
    for (int k = 1; k <= p && k <= n; ++k) value.noalias() += model.coeffs[k - 1] * y.row(n - k).transpose();
    y.row(n) = value.transpose();
  }

  TimeSeriesData data;
  data.samples = y.bottomRows(n_samples);
  data.fs = model.fs;
  for (int i = 0; i < q; ++i) data.channel_names.push_back("Y" + std::to_string(i + 1));
  return data;
}

}  // namespace oir
