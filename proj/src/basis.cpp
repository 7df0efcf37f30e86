#include "voltacell/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace voltacell {

namespace {

// Legendre P_n and its derivative at x.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

std::vector<double> gauss_lobatto_nodes(int p) {
  if (p < 1) throw std::invalid_argument("gauss_lobatto_nodes: degree must be >= 1");
  std::vector<double> x(p + 1);
  x[0] = -1.0;
  x[p] = 1.0;
  // Interior nodes are the roots of P'_p; Newton on q = (1-x^2) P'_p.
  for (int i = 1; i < p; ++i) {
    double xi = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      double pn, dpn;
      legendre(p, xi, pn, dpn);
      // d/dx[(1-x^2)P'] = -p(p+1) P
      const double q = (1.0 - xi * xi) * dpn;
      const double dq = -p * (p + 1.0) * pn;
      const double dx = q / dq;
      xi -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    x[i] = xi;
  }
  for (int i = 0; i <= p / 2; ++i) {
    const double s = 0.5 * (x[p - i] - x[i]);
    x[i] = -s;
    x[p - i] = s;
  }
  if (p % 2 == 0) x[p / 2] = 0.0;
  return x;
}

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, pn, dpn);
    r.x[n - 1 - i] = x;
    r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dpn * dpn);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (r.x[n - 1 - i] - r.x[i]);
    const double w = 0.5 * (r.w[n - 1 - i] + r.w[i]);
    r.x[i] = -s;
    r.x[n - 1 - i] = s;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

QuadratureRule square_rule(int nx, int ny) {
  const Rule1D rx = gauss_legendre(nx);
  const Rule1D ry = gauss_legendre(ny);
  QuadratureRule q;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      q.points.push_back({rx.x[i], ry.x[j]});
      q.weights.push_back(rx.w[i] * ry.w[j]);
    }
  }
  return q;
}

Lagrange1D::Lagrange1D(int p) : nodes_(gauss_lobatto_nodes(p)), denom_(p + 1, 1.0) {
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= p; ++j) {
      if (j != i) denom_[i] *= nodes_[i] - nodes_[j];
    }
  }
}

void Lagrange1D::eval(double x, double* values, double* derivatives) const {
  const int n = static_cast<int>(nodes_.size());
  for (int i = 0; i < n; ++i) {
    double v = 1.0;
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double f = x - nodes_[j];
      d = d * f + v;
      v *= f;
    }
    values[i] = v / denom_[i];
    if (derivatives) derivatives[i] = d / denom_[i];
  }
}

ShapeValues shape_eval(int px, int py, double xi, double eta) {
  if (px < 1 || py < 1) throw std::invalid_argument("shape_eval: degrees must be >= 1");
  const Lagrange1D lx(px), ly(py);
  std::vector<double> vx(px + 1), dx(px + 1), vy(py + 1), dy(py + 1);
  lx.eval(xi, vx.data(), dx.data());
  ly.eval(eta, vy.data(), dy.data());
  ShapeValues s;
  s.values.resize((px + 1) * (py + 1));
  s.gradients.resize(s.values.size());
  for (int b = 0; b <= py; ++b) {
    for (int a = 0; a <= px; ++a) {
      const int i = b * (px + 1) + a;
      s.values[i] = vx[a] * vy[b];
      s.gradients[i] = {dx[a] * vy[b], vx[a] * dy[b]};
    }
  }
  return s;
}

Point BilinearMap::map(double xi, double eta) const {
  const double n[4] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                       0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
  Point p;
  for (int i = 0; i < 4; ++i) {
    p.x += n[i] * v[i].x;
    p.y += n[i] * v[i].y;
  }
  return p;
}

std::array<double, 4> BilinearMap::jacobian(double xi, double eta) const {
  const double dxi[4] = {-0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta), -0.25 * (1 + eta)};
  const double deta[4] = {-0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi), 0.25 * (1 - xi)};
  std::array<double, 4> j{};
  for (int i = 0; i < 4; ++i) {
    j[0] += dxi[i] * v[i].x;
    j[1] += deta[i] * v[i].x;
    j[2] += dxi[i] * v[i].y;
    j[3] += deta[i] * v[i].y;
  }
  return j;
}

BilinearMap element_map(const Mesh& mesh, int k) {
  BilinearMap m;
  for (int i = 0; i < 4; ++i) m.v[i] = mesh.nodes[mesh.quads[k][i]];
  return m;
}

std::array<double, 2> edge_reference_point(int e, double t) {
  switch (e) {
    case 0: return {t, -1.0};
    case 1: return {1.0, t};
    case 2: return {t, 1.0};
    case 3: return {-1.0, t};
  }
  throw std::out_of_range("edge_reference_point: bad local edge");
}

}  // namespace voltacell
