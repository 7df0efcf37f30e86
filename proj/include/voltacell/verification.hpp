#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "voltacell/time_integrator.hpp"

namespace voltacell {

/// Fixed-coefficient coupled linear system
///   M d' + K d = G s,   K_s s = G^T d,
/// with M, K, K_s SPD. Eliminating s gives M d' + A d = 0 with
/// A = K - G K_s^{-1} G^T, solved exactly through the (A, M) eigenpairs.
class LinearSurrogate {
 public:
  struct State {
    Eigen::VectorXd d;
    Eigen::VectorXd s;
  };

  LinearSurrogate(Eigen::MatrixXd M, Eigen::MatrixXd K, Eigen::MatrixXd G, Eigen::MatrixXd Ks);
  /// Deterministic well-conditioned instance with n dynamic and m static unknowns.
  static LinearSurrogate random(int n, int m, unsigned seed = 7);

  State consistent(const Eigen::VectorXd& d) const;
  State exact(const Eigen::VectorXd& d0, double t) const;

  State stage1(const State& prev, const State& mid, double t, double dt);
  void stage2(State& cur, const State& lagged, double t);
  State euler_predict(const State& prev, double t, double dt);
  State combine(const State& a, double wa, const State& b, double wb) const;
  double relative_update(const State& a, const State& b) const;

  int stage1_calls() const { return stage1_calls_; }

 private:
  Eigen::MatrixXd M_, K_, G_, Ks_;
  Eigen::LLT<Eigen::MatrixXd> m_llt_, ks_llt_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd V_;
  int stage1_calls_ = 0;
};

static_assert(StaggeredProblem<LinearSurrogate>);

struct TemporalStudy {
  std::vector<double> dt;
  std::vector<double> error;  // max-norm error of d at t_end, relative to |d(t_end)|
  std::vector<double> order;  // between consecutive dt
  double min_order = 0.0;
};

TemporalStudy temporal_convergence(const std::vector<double>& dts = {8, 4, 2, 1}, double t_end = 64.0,
                                   int extra_fp_iters = 4);

struct SpatialStudy {
  std::string problem;  // "poisson" or "reaction_diffusion"
  int degree = 1;
  std::vector<int> n;
  std::vector<double> h1_error;  // H1 seminorm
  std::vector<double> rate;
};

/// Manufactured solutions with nonzero Dirichlet data on the unit square.
std::vector<SpatialStudy> spatial_convergence(const std::vector<int>& degrees = {1, 2, 3},
                                              const std::vector<int>& n = {4, 8, 16, 32});

void write_temporal_csv(const TemporalStudy& study, const std::string& path);
void write_spatial_csv(const std::vector<SpatialStudy>& studies, const std::string& path);

}  // namespace voltacell
