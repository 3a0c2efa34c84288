#include "oir/spectral.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace oir {
namespace {

using cd = std::complex<double>;

double anti_hermitian_ratio(const CMat& m) {
  const double norm = m.norm();
  return norm > 0.0 ? (m - m.adjoint()).norm() / norm : 0.0;
}

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

void require_blocks(const SpectralMatrices& sm) {
  if (sm.s.size() != sm.h.size() || sm.s.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "spectral density not computed");
  }
  if (sm.r1 < 1 || sm.r2 < 1) {
    throw Error(ErrorCode::kInvalidArgument, "coupling measures need two nonempty blocks");
  }
}

// |H_ii V_ii H_ii^*| for block i (0 -> Z1, 1 -> Z2).
struct OwnPart {
  CMat m;
  double residue;
};

OwnPart own_part(const SpectralMatrices& sm, const Mat& v_t, int point, int block) {
  const int off = block == 0 ? 0 : sm.r1;
  const int len = block == 0 ? sm.r1 : sm.r2;
  const CMat hii = sm.h[point].block(off, off, len, len);
  const CMat vii = v_t.block(off, off, len, len).cast<cd>();
  const CMat raw = hii * vii * hii.adjoint();
  return {hermitian_part(raw), anti_hermitian_ratio(raw)};
}

void check_vt(const SpectralMatrices& sm, const Mat& v_t) {
  if (v_t.rows() != sm.dim() || v_t.cols() != sm.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "innovation covariance does not match spectral dimension");
  }
}

}  // namespace

FrequencyGrid FrequencyGrid::uniform(double fs, int n) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "frequency grid needs at least 3 points");
  if (!(fs > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sampling frequency must be positive");
  FrequencyGrid grid;
  grid.fs = fs;
  grid.freqs_hz.resize(n);
  for (int i = 0; i < n; ++i) grid.freqs_hz[i] = 0.5 * fs * i / (n - 1);
  grid.freqs_hz.back() = 0.5 * fs;
  return grid;
}

double FrequencyGrid::omega(int i) const { return std::numbers::pi * i / (size() - 1); }

SpectralProfile SpectralProfile::zeros(const FrequencyGrid& grid, std::string label) {
  SpectralProfile p;
  p.values.assign(grid.size(), 0.0);
  p.grid = grid;
  p.label = std::move(label);
  return p;
}

SpectralProfile& SpectralProfile::add_scaled(const SpectralProfile& other, double weight) {
  if (other.values.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "profiles live on different grids");
  }
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += weight * other.values[i];
  imag_residue = std::max(imag_residue, other.imag_residue);
  return *this;
}

SpectralMatrices transfer_function(const ReducedStateSpaceModel& rm, const FrequencyGrid& grid, int r1) {
  const int r = rm.outputs();
  const int n = static_cast<int>(rm.a_t.rows());
  if (r1 < 0) r1 = r;
  if (r1 > r) throw Error(ErrorCode::kInvalidArgument, "block split exceeds model dimension");

  SpectralMatrices sm;
  sm.grid = grid;
  sm.r1 = r1;
  sm.r2 = r - r1;
  sm.h.resize(grid.size());

  const CMat a = rm.a_t.cast<cd>();
  const CMat c = rm.c_t.cast<cd>();
  const CMat k = rm.k_t.cast<cd>();
  const CMat eye_n = CMat::Identity(n, n);
  for (int i = 0; i < grid.size(); ++i) {
    const double w = grid.omega(i);
    cd z(std::cos(w), -std::sin(w));
    if (i == 0) z = 1.0;
    if (i == grid.size() - 1) z = -1.0;
    Eigen::PartialPivLU<CMat> lu(eye_n - a * z);
    if (!(lu.rcond() > 1e-14)) {
      std::ostringstream msg;
      msg << "resolvent is singular at " << grid.freqs_hz[i] << " Hz";
      throw Error(ErrorCode::kSingularMatrix, msg.str());
    }
    sm.h[i] = CMat::Identity(r, r) + c * lu.solve(k * z);
  }
  return sm;
}

SpectralMatrices psd(SpectralMatrices sm, const Mat& v_t) {
  check_vt(sm, v_t);
  const CMat v = v_t.cast<cd>();
  sm.s.resize(sm.h.size());
  for (std::size_t i = 0; i < sm.h.size(); ++i) {
    sm.s[i] = hermitian_part(sm.h[i] * v * sm.h[i].adjoint());
  }
  return sm;
}

double logdet_hermitian(const CMat& m, double freq_hz) {
  Eigen::LLT<CMat> llt(m);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "spectral matrix is not positive definite at " << freq_hz << " Hz";
    throw SpectrumError(msg.str(), freq_hz);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double d = llt.matrixLLT()(i, i).real();
    if (!(d > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive pivot at " << freq_hz << " Hz";
      throw SpectrumError(msg.str(), freq_hz);
    }
    sum += std::log(d);
  }
  return 2.0 * sum;
}

SpectralProfile coupling_spectrum(const SpectralMatrices& sm) {
  require_blocks(sm);
  auto out = SpectralProfile::zeros(sm.grid, "coupling");
  for (int i = 0; i < sm.grid.size(); ++i) {
    const double f = sm.grid.freqs_hz[i];
    const CMat& s = sm.s[i];
    out.values[i] = logdet_hermitian(s.topLeftCorner(sm.r1, sm.r1), f) +
                    logdet_hermitian(s.bottomRightCorner(sm.r2, sm.r2), f) - logdet_hermitian(s, f);
  }
  return out;
}

SpectralProfile causal_spectrum(const SpectralMatrices& sm, const Mat& v_t, Direction direction) {
  require_blocks(sm);
  check_vt(sm, v_t);
  // The target block is the one whose spectrum is being explained.
  const int target = direction == Direction::kOneToTwo ? 1 : 0;
  auto out = SpectralProfile::zeros(sm.grid, direction == Direction::kOneToTwo ? "te_1to2" : "te_2to1");
  for (int i = 0; i < sm.grid.size(); ++i) {
    const double f = sm.grid.freqs_hz[i];
    const CMat s_target = target == 0 ? CMat(sm.s[i].topLeftCorner(sm.r1, sm.r1))
                                      : CMat(sm.s[i].bottomRightCorner(sm.r2, sm.r2));
    const OwnPart own = own_part(sm, v_t, i, target);
    out.values[i] = logdet_hermitian(s_target, f) - logdet_hermitian(own.m, f);
    out.imag_residue = std::max(out.imag_residue, own.residue);
  }
  return out;
}

SpectralProfile instantaneous_spectrum(const SpectralMatrices& sm, const Mat& v_t) {
  require_blocks(sm);
  check_vt(sm, v_t);
  auto out = SpectralProfile::zeros(sm.grid, "inst");
  for (int i = 0; i < sm.grid.size(); ++i) {
    const double f = sm.grid.freqs_hz[i];
    const OwnPart own1 = own_part(sm, v_t, i, 0);
    const OwnPart own2 = own_part(sm, v_t, i, 1);
    out.values[i] = logdet_hermitian(own1.m, f) + logdet_hermitian(own2.m, f) - logdet_hermitian(sm.s[i], f);
    out.imag_residue = std::max({out.imag_residue, own1.residue, own2.residue});
  }
  return out;
}

double integrate(const SpectralProfile& profile, const std::optional<Band>& band) {
  const auto& f = profile.grid.freqs_hz;
  const auto& y = profile.values;
  const int n = static_cast<int>(f.size());
  if (n < 2 || y.size() != f.size()) throw Error(ErrorCode::kInvalidArgument, "profile and grid sizes differ");
  const double nyquist = f.back();
  double lo = 0.0;
  double hi = nyquist;
  if (band) {
    lo = band->lo;
    hi = band->hi;
    if (!(lo >= 0.0) || !(hi <= nyquist * (1.0 + 1e-12)) || !(lo <= hi)) {
      std::ostringstream msg;
      msg << "band [" << lo << ", " << hi << "] Hz is outside [0, " << nyquist << "]";
      throw Error(ErrorCode::kInvalidBand, msg.str());
    }
    hi = std::min(hi, nyquist);
  }

  auto interp = [&](double x) {
    auto it = std::upper_bound(f.begin(), f.end(), x);
    int j = static_cast<int>(it - f.begin());
    j = std::clamp(j, 1, n - 1);
    const double t = (x - f[j - 1]) / (f[j] - f[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
  };

  // Piecewise-linear integral in Hz; (1/2pi) dw = df / fs.
  double sum = 0.0;
  double prev_x = lo;
  double prev_y = interp(lo);
  for (int i = 0; i < n; ++i) {
    if (f[i] <= lo) continue;
    if (f[i] >= hi) break;
    sum += 0.5 * (y[i] + prev_y) * (f[i] - prev_x);
    prev_x = f[i];
    prev_y = y[i];
  }
  sum += 0.5 * (interp(hi) + prev_y) * (hi - prev_x);
  return sum / profile.grid.fs;
}

}  // namespace oir
