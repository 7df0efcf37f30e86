#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "voltacell/assembly.hpp"

namespace voltacell {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SolverOptions {
  double rtol = 1e-10;
  int max_iterations = 20000;
  /// Direct sparse LDL^T by default; false goes straight to preconditioned CG.
  bool direct = true;
};

struct SolveReport {
  bool used_iterative = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// SPD solver with cached symbolic analysis. The sparsity pattern is
/// analysed once and reused while it stays unchanged.
class SpdSolver {
 public:
  explicit SpdSolver(SolverOptions options = {});
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  void factorize(const SparseSym& a);
  Vector solve(const Vector& b);
  const SolveReport& last_report() const { return report_; }
  bool ready() const { return ready_; }

 private:
  struct Impl;
  SolverOptions options_;
  std::unique_ptr<Impl> impl_;
  SolveReport report_;
  bool ready_ = false;
};

Vector solve_spd(const SparseSym& a, const Vector& b, const SolverOptions& options = {});

/// Number of threads Eigen may use; 1 keeps runs bit-reproducible.
void set_thread_count(int n);
int thread_count();

}  // namespace voltacell
