#include "voltacell/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <limits>
#include <sstream>

namespace voltacell {

struct SpdSolver::Impl {
  SparseMatrix a;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool analysed = false;
  bool factor_ok = false;
  Eigen::VectorXi outer;
  Eigen::VectorXi inner;
};

SpdSolver::SpdSolver(SolverOptions options) : options_(options), impl_(std::make_unique<Impl>()) {}
SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

namespace {

bool same_pattern(const SparseMatrix& m, const Eigen::VectorXi& outer, const Eigen::VectorXi& inner) {
  if (outer.size() != m.outerSize() + 1 || inner.size() != m.nonZeros()) return false;
  for (Eigen::Index i = 0; i <= m.outerSize(); ++i) {
    if (outer[i] != m.outerIndexPtr()[i]) return false;
  }
  for (Eigen::Index i = 0; i < m.nonZeros(); ++i) {
    if (inner[i] != m.innerIndexPtr()[i]) return false;
  }
  return true;
}

}  // namespace

void SpdSolver::factorize(const SparseSym& a) {
  Impl& s = *impl_;
  s.a = a.matrix;
  s.a.makeCompressed();
  ready_ = true;
  s.factor_ok = false;
  if (!options_.direct || s.a.rows() == 0) return;
  if (!s.analysed || !same_pattern(s.a, s.outer, s.inner)) {
    s.ldlt.analyzePattern(s.a);
    s.outer = Eigen::Map<const Eigen::VectorXi>(s.a.outerIndexPtr(), s.a.outerSize() + 1);
    s.inner = Eigen::Map<const Eigen::VectorXi>(s.a.innerIndexPtr(), s.a.nonZeros());
    s.analysed = true;
  }
  s.ldlt.factorize(s.a);
  s.factor_ok = s.ldlt.info() == Eigen::Success;
  if (s.factor_ok) {
    // LDL^T of an SPD matrix has a positive diagonal.
    s.factor_ok = (s.ldlt.vectorD().array() > 0.0).all();
  }
}

Vector SpdSolver::solve(const Vector& b) {
  if (!ready_) throw SolverError("SpdSolver: solve called before factorize", 0.0);
  Impl& s = *impl_;
  report_ = {};
  if (b.size() != s.a.rows()) throw SolverError("SpdSolver: right-hand side has wrong size", 0.0);
  if (b.size() == 0) return b;
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());
  const double target = options_.rtol * bnorm;

  Vector x = Vector::Zero(b.size());
  if (s.factor_ok) {
    x = s.ldlt.solve(b);
    Vector r = b - s.a * x;
    if (r.norm() > target) {
      x += s.ldlt.solve(r);
      r = b - s.a * x;
    }
    report_.relative_residual = r.norm() / bnorm;
    if (r.norm() <= target && x.allFinite()) return x;
    if (!x.allFinite()) x.setZero();
  }

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  cg.setTolerance(options_.rtol);
  cg.setMaxIterations(options_.max_iterations);
  cg.compute(s.a);
  report_.used_iterative = true;
  if (cg.info() == Eigen::Success) {
    x = cg.solveWithGuess(b, x);
    report_.iterations = static_cast<int>(cg.iterations());
  }
  const double res = x.allFinite() ? (b - s.a * x).norm() : std::numeric_limits<double>::infinity();
  report_.relative_residual = res / bnorm;
  if (!(res <= target) || !x.allFinite()) {
    std::ostringstream os;
    os << "SpdSolver: no convergence, relative residual " << report_.relative_residual
       << " > tolerance " << options_.rtol << " (n = " << b.size() << ")";
    throw SolverError(os.str(), report_.relative_residual);
  }
  return x;
}

Vector solve_spd(const SparseSym& a, const Vector& b, const SolverOptions& options) {
  SpdSolver s(options);
  s.factorize(a);
  return s.solve(b);
}

namespace {
int g_threads = 1;
}

void set_thread_count(int n) {
  g_threads = n < 1 ? 1 : n;
  Eigen::setNbThreads(g_threads);
}

int thread_count() { return g_threads; }

}  // namespace voltacell
