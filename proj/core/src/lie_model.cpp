#include "pwlab/lie_model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pwlab/holonomy.hpp"
#include "pwlab/kahler.hpp"

namespace pwlab {

LieAlgebra::LieAlgebra(int n, Rational b_p, Rational b0, std::vector<int> epsilons)
    : n_(n), dim_(2 * n + 5), b_p_(std::move(b_p)), b0_(std::move(b0)), eps_(std::move(epsilons)),
      c_(size_t(dim_) * dim_ * dim_) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  if (eps_.empty()) eps_.assign(size_t(n), 1);
  if (int(eps_.size()) != n) throw std::invalid_argument("need one signature entry per (x, y) pair");
  for (int e : eps_)
    if (e != 1 && e != -1) throw std::invalid_argument("signature entries must be +1 or -1");
  labels_ = {"A", "w1", "w2", "z1", "z2"};
  for (int a = 1; a <= n; ++a) {
    labels_.push_back("x" + std::to_string(a));
    labels_.push_back("y" + std::to_string(a));
  }
}

void LieAlgebra::set_bracket(int i, int j, const RVec& v) {
  for (int k = 0; k < dim_; ++k) {
    c_[idx(i, j, k)] = v[size_t(k)];
    c_[idx(j, i, k)] = -v[size_t(k)];
  }
}

RVec LieAlgebra::unit(int i) const {
  RVec v(static_cast<size_t>(dim_));
  v[size_t(i)] = 1;
  return v;
}

RVec LieAlgebra::bracket(int i, int j) const {
  RVec v(static_cast<size_t>(dim_));
  for (int k = 0; k < dim_; ++k) v[size_t(k)] = c_[idx(i, j, k)];
  return v;
}

RVec LieAlgebra::bracket(const RVec& x, const RVec& y) const {
  RVec out(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    if (x[size_t(i)] == 0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[size_t(j)] == 0) continue;
      const Rational f = x[size_t(i)] * y[size_t(j)];
      for (int k = 0; k < dim_; ++k)
        if (c_[idx(i, j, k)] != 0) out[size_t(k)] += f * c_[idx(i, j, k)];
    }
  }
  return out;
}

LieAlgebra build_algebra(int n, const Rational& b_p, const Rational& b0, const std::vector<int>& epsilons) {
  namespace L = lie_basis;
  LieAlgebra g(n, b_p, b0, epsilons);
  const int D = g.dim();
  auto vec = [D](std::initializer_list<std::pair<int, Rational>> terms) {
    RVec v(static_cast<size_t>(D));
    for (const auto& [k, c] : terms) v[size_t(k)] += c;
    return v;
  };
  g.set_bracket(L::A, L::w1, vec({{L::z2, 1}}));
  g.set_bracket(L::A, L::w2, vec({{L::z1, -1}}));
  g.set_bracket(L::z1, L::w1, vec({{L::z1, 1}}));
  g.set_bracket(L::z1, L::w2, vec({{L::z2, -1}, {L::A, 2}}));
  g.set_bracket(L::z2, L::w1, vec({{L::z2, 3}, {L::A, -2}}));
  g.set_bracket(L::z2, L::w2, vec({{L::z1, -1}}));
  g.set_bracket(L::w1, L::w2, vec({{L::z2, -2 * b_p}, {L::A, 2 * b_p - b0 / 2}}));
  for (int a = 0; a < n; ++a) {
    const int e = g.epsilons()[size_t(a)];
    g.set_bracket(L::x(a), L::y(a), vec({{L::z2, -2 * e}, {L::A, 2 * e}}));
    g.set_bracket(L::w1, L::x(a), vec({{L::x(a), -1}}));
    g.set_bracket(L::w1, L::y(a), vec({{L::y(a), -1}}));
    g.set_bracket(L::w2, L::x(a), vec({{L::y(a), -1}}));
    g.set_bracket(L::w2, L::y(a), vec({{L::x(a), 1}}));
  }
  return g;
}

Rational jacobi_residual(const LieAlgebra& alg) {
  const int D = alg.dim();
  Rational worst = 0;
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j)
      for (int k = j + 1; k < D; ++k) {
        const RVec a = alg.bracket(alg.bracket(i, j), alg.unit(k));
        const RVec b = alg.bracket(alg.bracket(j, k), alg.unit(i));
        const RVec c = alg.bracket(alg.bracket(k, i), alg.unit(j));
        for (int m = 0; m < D; ++m) {
          const Rational s = abs(a[size_t(m)] + b[size_t(m)] + c[size_t(m)]);
          if (s > worst) worst = s;
        }
      }
  return worst;
}

void flip_bracket(LieAlgebra& alg, int i, int j, int k) {
  RVec v = alg.bracket(i, j);
  v[size_t(k)] = -v[size_t(k)];
  alg.set_bracket(i, j, v);
}

namespace {

RationalSubspace bracket_span(const LieAlgebra& g, const RationalSubspace& a, const RationalSubspace& b) {
  std::vector<RVec> gens;
  for (const RVec& x : a.basis())
    for (const RVec& y : b.basis()) gens.push_back(g.bracket(x, y));
  return RationalSubspace(g.dim(), gens);
}

RationalSubspace whole(const LieAlgebra& g) {
  std::vector<RVec> basis;
  for (int i = 0; i < g.dim(); ++i) basis.push_back(g.unit(i));
  return RationalSubspace(g.dim(), basis);
}

Mat ad_matrix(const LieAlgebra& g, const RVec& x) {
  const int D = g.dim();
  Mat m(D, D);
  for (int j = 0; j < D; ++j) {
    const RVec col = g.bracket(x, g.unit(j));
    for (int i = 0; i < D; ++i) m(i, j) = col[size_t(i)].get_d();
  }
  return m;
}

}  // namespace

StructureDiagnostics structure_diagnostics(const LieAlgebra& g) {
  namespace L = lie_basis;
  StructureDiagnostics d;
  const RationalSubspace full = whole(g);

  RationalSubspace cur = full;
  d.derived_series.push_back(cur.dim());
  while (cur.dim() > 0) {
    RationalSubspace next = bracket_span(g, cur, cur);
    if (next.dim() == cur.dim()) break;
    cur = next;
    d.derived_series.push_back(cur.dim());
  }
  d.solvable = cur.dim() == 0;
  d.derived_length = d.solvable ? int(d.derived_series.size()) - 1 : -1;

  cur = full;
  d.lower_central_series.push_back(cur.dim());
  while (cur.dim() > 0) {
    RationalSubspace next = bracket_span(g, full, cur);
    if (next.dim() == cur.dim()) break;
    cur = next;
    d.lower_central_series.push_back(cur.dim());
  }
  d.nilpotent = cur.dim() == 0;

  std::vector<RVec> nb = {g.unit(L::A), g.unit(L::z1), g.unit(L::z2)};
  for (int a = 0; a < g.n(); ++a) {
    nb.push_back(g.unit(L::x(a)));
    nb.push_back(g.unit(L::y(a)));
  }
  const RationalSubspace nil(g.dim(), nb);
  d.nilradical_is_ideal = nil.contains(bracket_span(g, full, nil));
  d.nilradical_contains_derived = nil.contains(bracket_span(g, full, full));
  const RationalSubspace n2 = bracket_span(g, nil, nil);
  const int n3 = bracket_span(g, nil, n2).dim();
  d.nilradical_two_step = n3 == 0;
  d.nilradical_class = n2.dim() == 0 ? 1 : n3 == 0 ? 2 : 3;

  // The ad-eigenvalues are linear in X (the algebra is solvable), so
  // rho(theta) = spectral radius of ad(cos w1 + sin w2) is Lipschitz with
  // constant |ad w1| + |ad w2|.
  const Mat a1 = ad_matrix(g, g.unit(L::w1)), a2 = ad_matrix(g, g.unit(L::w2));
  const double lip = a1.operatorNorm() + a2.operatorNorm();
  const int steps = 720;
  const double h = std::numbers::pi / steps;
  double min_rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double th = k * h;
    const Mat m = std::cos(th) * a1 + std::sin(th) * a2;
    const Eigen::EigenSolver<Mat> es(m, false);
    min_rho = std::min(min_rho, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  d.maximal_margin = min_rho - lip * h / 2;
  d.nilradical_maximal = d.solvable && d.maximal_margin > 0.0;

  RVec B = g.unit(L::z2);
  B[size_t(L::A)] = -1;
  bool heis = true;
  for (int a = 0; a < g.n(); ++a) {
    heis = heis && g.bracket(B, g.unit(L::x(a))) == RVec(size_t(g.dim())) &&
           g.bracket(B, g.unit(L::y(a))) == RVec(size_t(g.dim()));
    for (int b = 0; b < g.n(); ++b) {
      RVec expect(static_cast<size_t>(g.dim()));
      if (a == b)
        for (int k = 0; k < g.dim(); ++k) expect[size_t(k)] = -2 * g.epsilons()[size_t(a)] * B[size_t(k)];
      heis = heis && g.bracket(L::x(a), L::y(b)) == expect;
      heis = heis && g.bracket(L::x(a), L::x(b)) == RVec(size_t(g.dim()));
      heis = heis && g.bracket(L::y(a), L::y(b)) == RVec(size_t(g.dim()));
    }
  }
  d.heisenberg = heis;
  return d;
}

namespace {

void require_reference_point(const Point& p) {
  if (p[coord::w1] != 1.0 || p[coord::w2] != 0.0)
    throw std::invalid_argument("the reference point must have (w1, w2) = (1, 0)");
}

// (R(d_i, d_j))^l_m endomorphisms of R^S = [S_i, S_j] - S_{S_i d_j - S_j d_i}.
TensorValue rs_tensor(const HomogeneousStructure& h) {
  const int D = h.dim();
  TensorValue rs(D, {Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower});
  for (int l = 0; l < D; ++l)
    for (int m = 0; m < D; ++m)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
          double acc = 0.0;
          for (int q = 0; q < D; ++q)
            acc += h.S(l, i, q) * h.S(q, j, m) - h.S(l, j, q) * h.S(q, i, m) -
                   h.S(l, q, m) * (h.S(q, i, j) - h.S(q, j, i));
          rs(l, m, i, j) = acc;
        }
  return rs;
}

}  // namespace

CanonicalCurvature canonical_curvature(const MetricSpec& spec, const Point& p) {
  require_reference_point(p);
  const HomogeneousStructure h(spec, p);
  const int D = h.dim();
  const Mat& g = h.geometry().g();
  const Mat& J = h.J();
  const Mat A = holonomy_generator(spec.n);
  const Mat omega = g * J;
  const Vec& xi = h.fields().xi;
  const Vec& th = h.fields().theta;
  const Vec jxi = J * xi;
  const Vec xi_gj = (xi.transpose() * g * J).transpose();  // g(xi, J d_m)
  const TensorValue& Ru = h.geometry().riemann_up();

  CanonicalCurvature out;
  out.rs = rs_tensor(h);
  out.tilde = out.rs;
  for (int l = 0; l < D; ++l)
    for (int m = 0; m < D; ++m)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
          const double rs = out.rs(l, m, i, j);
          const double tilde = Ru(l, m, i, j) - rs;
          out.tilde(l, m, i, j) = tilde;
          const double formula = -2.0 * omega(i, j) * (xi_gj[m] * xi[l] + th[m] * jxi[l]);
          out.formula_defect = std::max(out.formula_defect, std::abs(rs - formula));
          out.generator_defect = std::max(out.generator_defect, std::abs(rs + 2.0 * omega(i, j) * A(l, m)));
          double area = 0.0;
          if (i == coord::w1 && j == coord::w2) area = 1.0;
          if (i == coord::w2 && j == coord::w1) area = -1.0;
          const double expect = (0.5 * spec.profile.b0 * area + 2.0 * omega(i, j)) * A(l, m);
          out.tilde_defect = std::max(out.tilde_defect, std::abs(tilde - expect));
        }
  return out;
}

GeometricBrackets geometric_brackets(const MetricSpec& spec, const Point& p) {
  require_reference_point(p);
  const HomogeneousStructure h(spec, p);
  const CanonicalCurvature cc = canonical_curvature(spec, p);
  const int D = h.dim();
  const Mat A = holonomy_generator(spec.n);
  GeometricBrackets gb;
  gb.dim = D + 1;
  gb.c.assign(size_t(gb.dim) * gb.dim * gb.dim, 0.0);
  auto at = [&gb](int i, int j, int k) -> double& { return gb.c[(size_t(i) * gb.dim + j) * gb.dim + k]; };
  for (int i = 0; i < D; ++i)
    for (int l = 0; l < D; ++l) {
      at(0, 1 + i, 1 + l) = A(l, i);
      at(1 + i, 0, 1 + l) = -A(l, i);
    }
  const double a2 = A.squaredNorm();
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Mat t(D, D);
      for (int l = 0; l < D; ++l)
        for (int m = 0; m < D; ++m) t(l, m) = cc.tilde(l, m, i, j);
      const double coef = (t.array() * A.array()).sum() / a2;
      gb.proportionality_defect = std::max(gb.proportionality_defect, (t - coef * A).cwiseAbs().maxCoeff());
      at(1 + i, 1 + j, 0) = -coef;
      for (int l = 0; l < D; ++l) at(1 + i, 1 + j, 1 + l) = h.S(l, i, j) - h.S(l, j, i);
    }
  return gb;
}

Eigen::MatrixXcd table_matrix(int n, double b_p, double b0, const Eigen::VectorXd& q) {
  const int N = 2 * n + 5;
  if (q.size() != N) throw std::invalid_argument("parameter vector must have 2n+5 entries");
  const double lambda = 2.0 * b_p, mu = b0 / 2.0;
  const std::complex<double> I(0.0, 1.0);
  const double t = q[0], w1 = q[1], w2 = q[2], z1 = q[3], z2 = q[4];
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
  const int c1 = N - 2, c2 = N - 1;
  m(0, 0) = -2.0 * w1;
  m(0, 1) = 2.0 * w2 + 2.0 * w1 * I;
  m(0, 2) = 2.0 * w2 + 2.0 * w1 * I;
  for (int a = 0; a < n; ++a) {
    const double x = q[lie_basis::x(a)], y = q[lie_basis::y(a)];
    m(0, 3 + 2 * a) = -4.0 * y * I;
    m(0, 4 + 2 * a) = -4.0 * x * I;
    const int rx = 3 + 2 * a, ry = 4 + 2 * a;
    m(rx, rx) = -w1 + w2 * I;
    m(rx, c1) = x;
    m(rx, c2) = -x * I;
    m(ry, ry) = -w1 + w2 * I;
    m(ry, c1) = y;
    m(ry, c2) = y * I;
  }
  m(0, c1) = 2.0 * t + (lambda - mu) * w2 + 2.0 * (z1 - z2) * I;
  m(0, c2) = -4.0 + (mu - lambda) * w1;
  m(1, 1) = -w1 + w2 * I;
  m(1, c1) = z1 - (mu / 2.0) * w2 * I;
  m(1, c2) = (mu / 2.0) * w1 * I;
  m(2, 2) = -w1 - w2 * I;
  m(2, c1) = z2 - (mu / 2.0) * w2 * I;
  m(2, c2) = z1 + z2 * I - (mu / 2.0) * w1 * I;
  return m;
}

RepCheck matrix_rep_check(const LieAlgebra& alg, double tol) {
  const int N = alg.dim();
  const double bp = alg.b_p().get_d(), b0 = alg.b0().get_d();
  const Eigen::MatrixXcd m0 = table_matrix(alg.n(), bp, b0, Eigen::VectorXd::Zero(N));
  auto rho = [&](const Eigen::VectorXd& q) { return Eigen::MatrixXcd(table_matrix(alg.n(), bp, b0, q) - m0); };
  RepCheck rc;
  rc.affine_defect = m0.cwiseAbs().maxCoeff();
  if (alg.n() > 0) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(N, lie_basis::x(0));
    rc.linearity_defect = (rho(2.0 * e) - 2.0 * rho(e)).cwiseAbs().maxCoeff();
  } else {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(N, lie_basis::z1);
    rc.linearity_defect = (rho(2.0 * e) - 2.0 * rho(e)).cwiseAbs().maxCoeff();
  }
  Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(N, N);
  iso(0, N - 2) = 2.0;
  rc.isotropy_matches = (rho(Eigen::VectorXd::Unit(N, lie_basis::A)) - iso).cwiseAbs().maxCoeff() == 0.0;

  std::vector<Eigen::MatrixXcd> images;
  for (int i = 0; i < N; ++i) images.push_back(rho(Eigen::VectorXd::Unit(N, i)));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      const RVec br = alg.bracket(i, j);
      Eigen::VectorXd q(N);
      for (int k = 0; k < N; ++k) q[k] = br[size_t(k)].get_d();
      const Eigen::MatrixXcd comm = images[size_t(i)] * images[size_t(j)] - images[size_t(j)] * images[size_t(i)];
      const double mis = (comm - rho(q)).cwiseAbs().maxCoeff();
      rc.pairs.push_back({i, j, mis});
      (mis <= tol ? rc.matched : rc.mismatched) += 1;
    }
  return rc;
}

KGeodesicResult k_geodesic(double b_p, double u0, double v0, double t0, double t_end,
                           const KGeodesicOptions& opt) {
  if (b_p == 0.0) throw std::invalid_argument("b_p must be nonzero");
  const double root = std::sqrt(std::abs(b_p));
  KGeodesicResult res;
  const double x0 = u0 + v0, y0 = u0 - v0;
  if (x0 != 0.0) {
    res.has_pole = true;
    res.c = t0 - root / x0;
    res.K = y0 / (t0 - res.c);
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    res.pole_ahead = dir * (res.c - t0) > 0.0 && dir * (t_end - res.c) >= 0.0;
  }
  auto closed = [&](double t) {
    if (!res.has_pole) return std::pair{0.0, y0};
    return std::pair{root / (t - res.c), res.K * (t - res.c)};
  };

  const OdeRhs rhs = [root](const OdeState& s, OdeState& ds, double) {
    const double u = s[0], v = s[1];
    ds[0] = -(u * v + v * v) / root;
    ds[1] = -(u * v + u * u) / root;
  };
  StepHooks hooks;
  hooks.max_step = [root](const OdeState& s, double) {
    const double size = std::abs(s[0]) + std::abs(s[1]);
    return size > 0.0 ? 0.1 * root / size : std::numeric_limits<double>::infinity();
  };
  hooks.halt = [&opt](const OdeState& s, double) {
    return std::abs(s[0] + s[1]) > opt.blowup_threshold ? IntegrationStatus::BlowUp : IntegrationStatus::Completed;
  };
  hooks.observe = [&](const OdeState& s, double t) {
    const auto [xc, yc] = closed(t);
    res.rows.push_back({t, s[0], s[1], s[0] + s[1], s[0] - s[1], xc, yc});
  };
  IntegratorOptions io;
  io.abs_tol = opt.tol;
  io.rel_tol = opt.tol;
  io.initial_step = 1e-4;
  OdeState s = {u0, v0};
  const IntegrationResult ir = integrate_adaptive(rhs, s, t0, t_end, io, hooks);
  res.status = ir.status;
  res.t_stop = ir.t;

  const double window = res.pole_ahead ? 0.9 * std::abs(res.c - t0) : std::numeric_limits<double>::infinity();
  for (const auto& r : res.rows) {
    if (std::abs(r.t - t0) > window) continue;
    res.max_rel_error_x = std::max(res.max_rel_error_x,
                                   r.x_closed == 0.0 ? std::abs(r.x) : std::abs(r.x - r.x_closed) / std::abs(r.x_closed));
    res.max_rel_error_y = std::max(res.max_rel_error_y,
                                   r.y_closed == 0.0 ? std::abs(r.y) : std::abs(r.y - r.y_closed) / std::abs(r.y_closed));
  }
  return res;
}

}  // namespace pwlab
