#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oir/model_core.h"

namespace oir {

/// Complex-conjugate pole pair at modulus rho and frequency f_hz.
struct PolePair {
  double rho = 0.0;
  double f_hz = 0.0;
  double fs = 1.0;
};

enum class FirKind { kLowpass, kHighpass };

struct FirSpec {
  int order = 20;
  double cutoff_hz = 0.0;
  FirKind kind = FirKind::kLowpass;
  double fs = 1.0;
};

/// (a1, a2) of x_n = a1 x_{n-1} + a2 x_{n-2} + u_n with poles rho*e^{+-j2pi f/fs}.
std::pair<double, double> ar2_coeffs(const PolePair& pole);

/// AR coefficients (lags 1..2n) of the product of the pairs' AR(2) polynomials.
std::vector<double> compose_poles(const std::vector<PolePair>& pairs);

/// Hamming-windowed sinc, order + 1 symmetric taps. Lowpass taps are scaled
/// to unit DC gain; highpass taps are delta minus the windowed lowpass
/// prototype, scaled to unit gain at Nyquist. Order must be even for
/// highpass.
std::vector<double> fir_design(const FirSpec& spec);

/// |sum_k b_k e^{-j 2pi f k / fs}|.
double fir_magnitude(const std::vector<double>& taps, double f_hz, double fs);

struct Sim1Options {
  /// Swap which cross-coupling carries the lowpass vs highpass taps.
  bool swap_filters = false;
};

struct Benchmark {
  VarModel model;
  BlockPartition partition;
};

/// Three scalar processes, fs = 1 Hz, p = 21: X1 with poles 0.85 at 0.1 and
/// 0.35 Hz, X2 with poles 0.7 at 0.1 Hz, X1->X2 highpass (gain 0.4), X1->X3
/// lowpass (gain 0.6), X2->X3 unit lag-1 coupling; noise variances 2, 0.5, 2.
Benchmark build_sim1(const Sim1Options& options = {});

/// Ten channels in five blocks, fs = 100 Hz, p = 2, unit noise variances.
Benchmark build_sim2();

/// Gaussian realization of the VAR, discarding burn_in leading samples.
/// Same seed gives bit-identical output on the same standard library.
TimeSeriesData realize(const VarModel& model, int n_samples, std::uint64_t seed, int burn_in = 1000);

}  // namespace oir
