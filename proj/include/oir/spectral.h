#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oir/state_space.h"

namespace oir {

using CMat = Eigen::MatrixXcd;

/// Uniform one-sided grid on [0, fs/2], both ends included.
struct FrequencyGrid {
  std::vector<double> freqs_hz;
  double fs = 1.0;

  static constexpr int kDefaultPoints = 1025;

  static FrequencyGrid uniform(double fs, int n = kDefaultPoints);

  int size() const { return static_cast<int>(freqs_hz.size()); }
  /// Normalized angular frequency of point i, in [0, pi].
  double omega(int i) const;
};

/// Closed frequency interval in Hz.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

/// Transfer and spectral density matrices of a reduced process Z = (Z1, Z2)
/// at every grid point. Z1 occupies the first r1 outputs.
struct SpectralMatrices {
  FrequencyGrid grid;
  std::vector<CMat> h;
  std::vector<CMat> s;
  int r1 = 0;
  int r2 = 0;

  int dim() const { return r1 + r2; }
};

struct SpectralProfile {
  std::vector<double> values;
  FrequencyGrid grid;
  std::string label;
  /// Largest relative anti-Hermitian part seen in the matrices whose
  /// determinants produced the values (before it was discarded).
  double imag_residue = 0.0;

  static SpectralProfile zeros(const FrequencyGrid& grid, std::string label);

  /// this += weight * other, pointwise. Grids must match.
  SpectralProfile& add_scaled(const SpectralProfile& other, double weight);
};

enum class Direction { kOneToTwo, kTwoToOne };

/// H(w) = I + C~ (I - A~ e^{-jw})^{-1} K~ e^{-jw}. The first r1 outputs form
/// Z1; r1 < 0 means the whole output is Z1 (r2 = 0).
SpectralMatrices transfer_function(const ReducedStateSpaceModel& rm, const FrequencyGrid& grid, int r1 = -1);

/// S(w) = H(w) V H(w)^*, made exactly Hermitian.
SpectralMatrices psd(SpectralMatrices sm, const Mat& v_t);

/// log(|S11||S22| / |S|).
SpectralProfile coupling_spectrum(const SpectralMatrices& sm);

/// kOneToTwo: log(|S22| / |H22 V22 H22^*|); kTwoToOne swaps the roles.
SpectralProfile causal_spectrum(const SpectralMatrices& sm, const Mat& v_t, Direction direction);

/// log(|H11 V11 H11^*| |H22 V22 H22^*| / |S|).
SpectralProfile instantaneous_spectrum(const SpectralMatrices& sm, const Mat& v_t);

/// (1/2pi) * integral of the profile over the angular image of the band, by
/// trapezoidal rule on the grid with linearly interpolated band edges. The
/// whole axis (no band) equals (1/4pi) times the integral over [-pi, pi].
double integrate(const SpectralProfile& profile, const std::optional<Band>& band = std::nullopt);

/// log-determinant of a Hermitian positive definite matrix; throws
/// SpectrumError tagged with freq_hz on a non-positive pivot.
double logdet_hermitian(const CMat& m, double freq_hz);

}  // namespace oir
