#include "oir/state_space.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace oir {
namespace {

Mat select_rows(const Mat& m, const IndexSet& r) {
  Mat out(r.size(), m.cols());
  for (std::size_t i = 0; i < r.size(); ++i) out.row(i) = m.row(r[i]);
  return out;
}

Mat select_cols(const Mat& m, const IndexSet& r) {
  Mat out(m.rows(), r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.col(i) = m.col(r[i]);
  return out;
}

Eigen::LLT<Mat> spd_factor(const Mat& m, const char* what) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerateReduction, std::string(what) + " is not positive definite");
  }
  return llt;
}

}  // namespace

StateSpaceModel var_to_ss(const VarModel& model) {
  model.validate();
  check_stable(model);
  const int q = model.q;
  const int n = model.p * q;

  StateSpaceModel ss;
  ss.a = companion(model);
  ss.c = ss.a.topRows(q);
  ss.k = Mat::Zero(n, q);
  ss.k.topRows(q).setIdentity();
  ss.v = model.sigma_u;
  ss.fs = model.fs;
  return ss;
}

ReducedStateSpaceModel reduce(const StateSpaceModel& ss, const IndexSet& r, const DareOptions& options) {
  const int q = ss.outputs();
  if (r.empty()) throw Error(ErrorCode::kInvalidArgument, "reduction index set is empty");
  std::set<int> distinct;
  for (int idx : r) {
    if (idx < 0 || idx >= q) throw Error(ErrorCode::kInvalidArgument, "reduction index outside 0..Q-1");
    if (!distinct.insert(idx).second) throw Error(ErrorCode::kInvalidArgument, "reduction indices must be distinct");
  }

  const Mat& a = ss.a;
  const Mat c_r = select_rows(ss.c, r);
  const Mat kv = ss.k * ss.v;
  const Mat state_noise = kv * ss.k.transpose();
  const Mat cross = select_cols(kv, r);
  const Mat obs_noise = select_rows(select_cols(ss.v, r), r);

  // P can legitimately be zero (all outputs kept), so the relative test gets a floor
  const double scale_floor = state_noise.norm();
  const int n = ss.states();
  Mat p = Mat::Zero(n, n);
  double change = 0.0;
  int iter = 0;
  bool converged = false;
  while (iter < options.max_iterations) {
    ++iter;
    const Mat gain_num = a * p * c_r.transpose() + cross;
    const Mat innov = c_r * p * c_r.transpose() + obs_noise;
    const auto llt = spd_factor(innov, "innovation covariance during Riccati iteration");
    Mat next = a * p * a.transpose() + state_noise - gain_num * llt.solve(gain_num.transpose());
    next = 0.5 * (next + next.transpose()).eval();
    const double norm = std::max(next.norm(), scale_floor);
    change = (next - p).norm();
    p = std::move(next);
    if (change <= options.tolerance * norm) {
      converged = true;
      change = change / norm;
      break;
    }
    change = change / norm;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Riccati iteration did not converge in " << options.max_iterations
        << " iterations (last relative change " << change << ")";
    throw ConvergenceError(msg.str(), change, iter);
  }

  ReducedStateSpaceModel out;
  out.a_t = a;
  out.c_t = c_r;
  Mat v_t = c_r * p * c_r.transpose() + obs_noise;
  out.v_t = 0.5 * (v_t + v_t.transpose());
  const auto llt = spd_factor(out.v_t, "reduced innovation covariance");
  const Mat gain_num = a * p * c_r.transpose() + cross;
  out.k_t = llt.solve(gain_num.transpose()).transpose();
  out.indices = r;
  out.fs = ss.fs;
  out.iterations = iter;
  out.residual = change;

  const double filter_radius = spectral_radius(Mat(out.a_t - out.k_t * out.c_t));
  if (!(filter_radius < 1.0)) {
    std::ostringstream msg;
    msg << "reduced model is not minimum phase (filter spectral radius " << filter_radius << ")";
    throw Error(ErrorCode::kDegenerateReduction, msg.str());
  }
  return out;
}

}  // namespace oir
