#include "voltacell/verification.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <stdexcept>

#include "voltacell/assembly.hpp"
#include "voltacell/geometry.hpp"
#include "voltacell/linear_solver.hpp"
#include "voltacell/space.hpp"

namespace voltacell {

LinearSurrogate::LinearSurrogate(Eigen::MatrixXd M, Eigen::MatrixXd K, Eigen::MatrixXd G,
                                 Eigen::MatrixXd Ks)
    : M_(std::move(M)), K_(std::move(K)), G_(std::move(G)), Ks_(std::move(Ks)) {
  const auto n = M_.rows();
  if (M_.cols() != n || K_.rows() != n || K_.cols() != n || G_.rows() != n || Ks_.rows() != Ks_.cols() ||
      G_.cols() != Ks_.rows()) {
    throw std::invalid_argument("LinearSurrogate: inconsistent matrix sizes");
  }
  m_llt_.compute(M_);
  ks_llt_.compute(Ks_);
  if (m_llt_.info() != Eigen::Success || ks_llt_.info() != Eigen::Success) {
    throw std::invalid_argument("LinearSurrogate: M and K_s must be SPD");
  }
  const Eigen::MatrixXd A = K_ - G_ * ks_llt_.solve(G_.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()), M_);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument("LinearSurrogate: reduced operator is not SPD");
  }
  lambda_ = es.eigenvalues();
  V_ = es.eigenvectors();
}

LinearSurrogate LinearSurrogate::random(int n, int m, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rnd = [&](int r, int c) {
    Eigen::MatrixXd x(r, c);
    for (int j = 0; j < c; ++j) {
      for (int i = 0; i < r; ++i) x(i, j) = u(gen);
    }
    return x;
  };
  const Eigen::MatrixXd R = rnd(n, n);
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) + 0.1 * R * R.transpose() / n;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rnd(n, n));
  const Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 0.02 + 0.28 * i / std::max(1, n - 1);
  const Eigen::MatrixXd K = Q * lam.asDiagonal() * Q.transpose();
  const Eigen::MatrixXd S = rnd(m, m);
  const Eigen::MatrixXd Ks = Eigen::MatrixXd::Identity(m, m) + 0.2 * S * S.transpose() / m;
  const Eigen::MatrixXd G = 0.05 * rnd(n, m);
  return LinearSurrogate(M, 0.5 * (K + K.transpose()), G, Ks);
}

LinearSurrogate::State LinearSurrogate::consistent(const Eigen::VectorXd& d) const {
  return {d, ks_llt_.solve(G_.transpose() * d)};
}

LinearSurrogate::State LinearSurrogate::exact(const Eigen::VectorXd& d0, double t) const {
  const Eigen::VectorXd modal = V_.transpose() * (M_ * d0);
  const Eigen::VectorXd decay = (-lambda_.array() * t).exp();
  return consistent(V_ * (decay.array() * modal.array()).matrix());
}

LinearSurrogate::State LinearSurrogate::stage1(const State& prev, const State& mid, double, double dt) {
  ++stage1_calls_;
  const Eigen::MatrixXd lhs = M_ + 0.5 * dt * K_;
  const Eigen::VectorXd rhs = dt * (G_ * mid.s - K_ * prev.d);
  State out = mid;
  out.d = prev.d + lhs.llt().solve(rhs);
  return out;
}

void LinearSurrogate::stage2(State& cur, const State&, double) {
  cur.s = ks_llt_.solve(G_.transpose() * cur.d);
}

LinearSurrogate::State LinearSurrogate::euler_predict(const State& prev, double, double dt) {
  State out = prev;
  out.d = prev.d + dt * m_llt_.solve(G_ * prev.s - K_ * prev.d);
  return out;
}

LinearSurrogate::State LinearSurrogate::combine(const State& a, double wa, const State& b,
                                                double wb) const {
  return {wa * a.d + wb * b.d, wa * a.s + wb * b.s};
}

double LinearSurrogate::relative_update(const State& a, const State& b) const {
  const double scale = std::max(b.d.cwiseAbs().maxCoeff(), 1e-300);
  return (a.d - b.d).cwiseAbs().maxCoeff() / scale;
}

TemporalStudy temporal_convergence(const std::vector<double>& dts, double t_end, int extra_fp_iters) {
  if (dts.size() < 2) throw std::invalid_argument("temporal_convergence: need at least two step sizes");
  TemporalStudy study;
  study.dt = dts;
  LinearSurrogate base = LinearSurrogate::random(6, 3);
  Eigen::VectorXd d0(6);
  d0 << 1.0, -0.5, 0.25, 0.8, -1.2, 0.4;
  const auto ref = base.exact(d0, t_end);
  for (double dt : dts) {
    const double steps = t_end / dt;
    if (std::abs(steps - std::round(steps)) > 1e-12 * steps) {
      throw std::invalid_argument("temporal_convergence: t_end must be a multiple of every dt");
    }
    LinearSurrogate p = base;
    IntegratorOptions o;
    o.extra_fp_iters = extra_fp_iters;
    o.fp_tol = 0.0;
    o.warmup_steps = 0;
    StaggeredMidpoint<LinearSurrogate> integ(p, p.consistent(d0), o);
    for (long i = 0; i < std::lround(steps); ++i) integ.step(dt);
    study.error.push_back((integ.state().d - ref.d).cwiseAbs().maxCoeff() / ref.d.cwiseAbs().maxCoeff());
  }
  study.min_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < dts.size(); ++i) {
    const double r = std::log(study.error[i - 1] / study.error[i]) / std::log(dts[i - 1] / dts[i]);
    study.order.push_back(r);
    study.min_order = std::min(study.min_order, r);
  }
  return study;
}

namespace {

constexpr double kPi = std::numbers::pi;

double u_exact(const Point& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y) + p.x * p.x + 0.5 * p.y; }

std::array<double, 2> grad_exact(const Point& p) {
  return {kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y) + 2.0 * p.x,
          kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y) + 0.5};
}

double laplacian_exact(const Point& p) { return -2.0 * kPi * kPi * std::sin(kPi * p.x) * std::sin(kPi * p.y) + 2.0; }

double solve_mms(int degree, int n, double reaction, double diffusion) {
  const Mesh mesh = make_rectangle_mesh(1.0, 1.0, n, n, degree);
  std::vector<EssentialBC> bcs;
  for (BoundaryPart part : {BoundaryPart::CcMinus, BoundaryPart::CcPlus, BoundaryPart::Top, BoundaryPart::Bottom}) {
    bcs.push_back({part, EssentialBC::kAll, u_exact});
  }
  const FieldSpace space(mesh, Support::All, 1, bcs);
  const QuadratureCache cache(mesh, 2);
  SparseMatrix A = assemble_stiffness(space, cache, constant_coefficient(diffusion));
  if (reaction > 0.0) A += assemble_mass(space, cache, constant_coefficient(reaction));
  const Vector b = assemble_source(space, cache, [&](int k, int q) {
    const Point& x = cache.element(k).x[q];
    return reaction * u_exact(x) - diffusion * laplacian_exact(x);
  });
  const Vector uh = expand_free(space, solve_spd(restrict_to_free(space, A), lifted_rhs(space, A, b)));
  double err = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementQuadrature& eq = cache.element(k);
    for (int q = 0; q < eq.num_points(); ++q) {
      const auto gh = field_gradient_at(space, eq, k, q, uh);
      const auto g = grad_exact(eq.x[q]);
      err += eq.weight[q] * ((gh[0] - g[0]) * (gh[0] - g[0]) + (gh[1] - g[1]) * (gh[1] - g[1]));
    }
  }
  return std::sqrt(err);
}

}  // namespace

std::vector<SpatialStudy> spatial_convergence(const std::vector<int>& degrees, const std::vector<int>& n) {
  std::vector<SpatialStudy> out;
  for (const auto& [name, reaction, diffusion] :
       {std::tuple{"poisson", 0.0, 1.0}, std::tuple{"reaction_diffusion", 1.0, 0.5}}) {
    for (int p : degrees) {
      SpatialStudy s;
      s.problem = name;
      s.degree = p;
      s.n = n;
      for (int m : n) s.h1_error.push_back(solve_mms(p, m, reaction, diffusion));
      for (std::size_t i = 1; i < n.size(); ++i) {
        s.rate.push_back(std::log(s.h1_error[i - 1] / s.h1_error[i]) /
                         std::log(static_cast<double>(n[i]) / n[i - 1]));
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_temporal_csv(const TemporalStudy& study, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << "dt_s,rel_error,observed_order\n" << std::setprecision(17);
  for (std::size_t i = 0; i < study.dt.size(); ++i) {
    f << study.dt[i] << ',' << study.error[i] << ',';
    if (i > 0) f << study.order[i - 1];
    f << "\n";
  }
}

void write_spatial_csv(const std::vector<SpatialStudy>& studies, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << "problem,degree,n,h1_error,observed_rate\n" << std::setprecision(17);
  for (const SpatialStudy& s : studies) {
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      f << s.problem << ',' << s.degree << ',' << s.n[i] << ',' << s.h1_error[i] << ',';
      if (i > 0) f << s.rate[i - 1];
      f << "\n";
    }
  }
}

}  // namespace voltacell
