#pragma once

#include "oir/model_core.h"

namespace oir {

/// Innovations form: S_{n+1} = A S_n + K U_n,  Y_n = C S_n + U_n,  cov(U) = V.
struct StateSpaceModel {
  Mat a;
  Mat c;
  Mat k;
  Mat v;
  double fs = 1.0;

  int outputs() const { return static_cast<int>(c.rows()); }
  int states() const { return static_cast<int>(a.rows()); }
};

/// Innovations form of the subprocess Y^(r): same state matrix, observation
/// rows r, and gain / innovation covariance from the Riccati solution.
struct ReducedStateSpaceModel {
  Mat a_t;
  Mat c_t;
  Mat k_t;
  Mat v_t;
  IndexSet indices;
  double fs = 1.0;
  int iterations = 0;
  double residual = 0.0;

  int outputs() const { return static_cast<int>(c_t.rows()); }
};

struct DareOptions {
  double tolerance = 1e-12;
  int max_iterations = 10000;
};

/// Companion-form state space of a stable VAR. Throws kUnstableModel otherwise.
StateSpaceModel var_to_ss(const VarModel& model);

/// Innovations-form submodel over channels r (in the given order).
///
/// Iterates the Riccati difference equation from P = 0 until the relative
/// Frobenius change drops below the tolerance, then sets
///   V~ = C~ P C~' + V(r,r),  K~ = (A P C~' + K V(:,r)) V~^-1.
/// Throws ConvergenceError when the budget is exhausted and kDegenerateReduction
/// when an innovation covariance stops being positive definite or the filter
/// A - K~ C~ is not strictly stable.
ReducedStateSpaceModel reduce(const StateSpaceModel& ss, const IndexSet& r,
                              const DareOptions& options = {});

}  // namespace oir
