#pragma once

#include <concepts>
#include <optional>
#include <stdexcept>
#include <vector>

namespace voltacell {

/// Problem interface for the staggered midpoint scheme. Stage 1 advances the
/// time-dependent fields with midpoint coefficients; stage 2 solves the
/// quasi-static fields in place, coupling to the lagged state.
template <class P>
concept StaggeredProblem = requires(P& p, const typename P::State& s, typename P::State& m,
                                    double t, double dt) {
  { p.stage1(s, s, t, dt) } -> std::same_as<typename P::State>;
  { p.stage2(m, s, t) };
  { p.euler_predict(s, t, dt) } -> std::same_as<typename P::State>;
  { p.combine(s, 1.0, s, 1.0) } -> std::same_as<typename P::State>;
  { p.relative_update(s, s) } -> std::convertible_to<double>;
};

struct IntegratorOptions {
  int extra_fp_iters = 4;
  double fp_tol = 1e-8;
  int warmup_steps = 2;
};

struct StepInfo {
  int sweeps = 0;
  double last_update = 0.0;
  std::vector<double> updates;
};

template <StaggeredProblem P>
class StaggeredMidpoint {
 public:
  using State = typename P::State;

  StaggeredMidpoint(P& problem, State initial, IntegratorOptions options = {}, double t0 = 0.0)
      : problem_(&problem), options_(options), t_(t0), prev_(std::move(initial)) {
    if (options_.extra_fp_iters < 0 || options_.warmup_steps < 0 || !(options_.fp_tol >= 0.0)) {
      throw std::invalid_argument("StaggeredMidpoint: invalid options");
    }
  }

  const State& state() const { return prev_; }
  double time() const { return t_; }
  bool has_history() const { return prev2_.has_value(); }
  const IntegratorOptions& options() const { return options_; }

  /// Advances by dt. With advance_time false the clock stays put (warm-up);
  /// the predictor is then always the Euler bootstrap.
  StepInfo step(double dt, bool advance_time = true) {
    if (!(dt > 0.0)) throw std::invalid_argument("StaggeredMidpoint: dt must be positive");
    P& p = *problem_;
    State pred;
    if (prev2_ && advance_time) {
      pred = p.combine(prev_, 2.0, *prev2_, -1.0);
    } else {
      pred = p.euler_predict(prev_, t_, dt);
      p.stage2(pred, prev_, t_ + dt);
    }
    StepInfo info;
    State mid = p.combine(prev_, 0.5, pred, 0.5);
    State cur = p.stage1(prev_, mid, t_, dt);
    p.stage2(cur, pred, t_ + dt);
    for (int k = 0; k < options_.extra_fp_iters; ++k) {
      mid = p.combine(prev_, 0.5, cur, 0.5);
      State next = p.stage1(prev_, mid, t_, dt);
      p.stage2(next, cur, t_ + dt);
      const double r = p.relative_update(next, cur);
      cur = std::move(next);
      ++info.sweeps;
      info.updates.push_back(r);
      info.last_update = r;
      if (r < options_.fp_tol) break;
    }
    prev2_ = std::move(prev_);
    prev_ = std::move(cur);
    if (advance_time) t_ += dt;
    return info;
  }

  /// Relaxation steps before the first real step; the clock is not advanced
  /// but the history is filled.
  void warmup(double dt) {
    for (int i = 0; i < options_.warmup_steps; ++i) step(dt, false);
  }

 private:
  P* problem_;
  IntegratorOptions options_;
  double t_;
  State prev_;
  std::optional<State> prev2_;
};

}  // namespace voltacell
