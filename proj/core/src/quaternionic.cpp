#include "pwlab/quaternionic.hpp"

#include <cmath>

namespace pwlab {

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shapes do not compose");
  RationalMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

Mat to_double(const RationalMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

namespace {

RationalMatrix identity(int n, const Rational& s = 1) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

bool equal(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

RationalMatrix transpose(const RationalMatrix& a) {
  RationalMatrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

RationalMatrix add(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

RVec mat_apply(const RationalMatrix& m, const RVec& v) {
  RVec out(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) out[size_t(i)] += m(i, j) * v[size_t(j)];
  return out;
}

}  // namespace

QuaternionTriple build_flat_model(int p, int q) {
  if (p < 0 || q < 0 || p + q < 2) throw std::invalid_argument("quaternionic model needs p, q >= 0 and p + q >= 2");
  QuaternionTriple t;
  t.p = p;
  t.q = q;
  const int D = t.dim();
  t.g = RationalMatrix(D, D);
  for (auto& j : t.J) j = RationalMatrix(D, D);
  // Left multiplication on (a, b, c, d) = a + b i + c j + d k.
  const int li[4][4] = {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  const int lj[4][4] = {{0, 0, -1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}};
  for (int blk = 0; blk < p + q; ++blk) {
    const int o = 4 * blk;
    for (int r = 0; r < 4; ++r) {
      t.g(o + r, o + r) = blk < p ? 1 : -1;
      for (int c = 0; c < 4; ++c) {
        t.J[0](o + r, o + c) = li[r][c];
        t.J[1](o + r, o + c) = lj[r][c];
      }
    }
  }
  t.J[2] = multiply(t.J[0], t.J[1]);
  return t;
}

RationalMatrix rational_rotation(const Rational& a, const Rational& b, const Rational& c) {
  RationalMatrix k(3, 3);
  k(0, 1) = -c;
  k(0, 2) = b;
  k(1, 0) = c;
  k(1, 2) = -a;
  k(2, 0) = -b;
  k(2, 1) = a;
  const RationalMatrix k2 = multiply(k, k);
  const Rational f = Rational(2) / (1 + a * a + b * b + c * c);
  RationalMatrix r = identity(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) += f * (k(i, j) + k2(i, j));
  return r;
}

QuaternionTriple rotate(const QuaternionTriple& t, const RationalMatrix& r) {
  QuaternionTriple out = t;
  const int D = t.dim();
  for (int a = 0; a < 3; ++a) {
    out.J[size_t(a)] = RationalMatrix(D, D);
    for (int b = 0; b < 3; ++b)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          if (t.J[size_t(b)](i, j) != 0) out.J[size_t(a)](i, j) += r(a, b) * t.J[size_t(b)](i, j);
  }
  return out;
}

RationalMatrix kahler_form(const QuaternionTriple& t, int a) { return multiply(t.g, t.J[size_t(a)]); }

FourForm fundamental_four_form(const QuaternionTriple& t) {
  const int D = t.dim();
  FourForm out;
  for (int a = 0; a < 3; ++a) {
    const RationalMatrix w = kahler_form(t, a);
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j)
        for (int k = j + 1; k < D; ++k)
          for (int l = k + 1; l < D; ++l) {
            const Rational v = 2 * (w(i, j) * w(k, l) - w(i, k) * w(j, l) + w(i, l) * w(j, k));
            if (v != 0) out[{i, j, k, l}] += v;
          }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

TripleChecks triple_checks(const QuaternionTriple& t, const RationalMatrix& rotation) {
  const int D = t.dim();
  TripleChecks c;
  const RationalMatrix minus_id = identity(D, -1);
  c.squares = true;
  c.skew = true;
  c.omega_antisymmetric = true;
  for (int a = 0; a < 3; ++a) {
    const RationalMatrix& j = t.J[size_t(a)];
    c.squares = c.squares && equal(multiply(j, j), minus_id);
    // g J + J^T g = 0
    const RationalMatrix gj = multiply(t.g, j);
    c.skew = c.skew && equal(add(gj, multiply(transpose(j), t.g)), RationalMatrix(D, D));
    const RationalMatrix w = kahler_form(t, a);
    c.omega_antisymmetric = c.omega_antisymmetric && equal(add(w, transpose(w)), RationalMatrix(D, D));
  }
  c.product = equal(multiply(t.J[0], t.J[1]), t.J[2]);
  c.triple_product = equal(multiply(multiply(t.J[0], t.J[1]), t.J[2]), minus_id);
  c.four_form_invariant = fundamental_four_form(t) == fundamental_four_form(rotate(t, rotation));
  return c;
}

TensorValue qk_structure_S(const QuaternionTriple& t, const Vec& xi) {
  const int D = t.dim();
  const Mat g = to_double(t.g);
  if (xi.size() != D) throw std::invalid_argument("xi has the wrong dimension");
  if (xi.cwiseAbs().maxCoeff() == 0.0) throw NonIsotropicXi("xi must be nonzero");
  if (std::abs(xi.dot(g * xi)) > 1e-14 * std::max(1.0, xi.squaredNorm()))
    throw NonIsotropicXi("xi must be a null vector");
  const Vec th = g * xi;
  TensorValue S(D, {Variance::Upper, Variance::Lower, Variance::Lower});
  for (int l = 0; l < D; ++l)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) S(l, i, j) = g(i, j) * xi[l] - (l == i ? th[j] : 0.0);
  for (int a = 0; a < 3; ++a) {
    const Mat J = to_double(t.J[size_t(a)]);
    const Vec jt = J.transpose() * th;  // g(J_a d_j, xi)
    const Mat gj = g * J;               // g(d_i, J_a d_j)
    const Vec jxi = J * xi;
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) S(l, i, j) += jt[j] * J(l, i) - gj(i, j) * jxi[l];
  }
  return S;
}

double qk_metric_skew_defect(const QuaternionTriple& t, const TensorValue& S) {
  const int D = t.dim();
  const Mat g = to_double(t.g);
  double worst = 0.0;
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y)
      for (int z = 0; z < D; ++z) {
        double acc = 0.0;
        for (int l = 0; l < D; ++l) acc += S(l, x, y) * g(l, z) + S(l, x, z) * g(y, l);
        worst = std::max(worst, std::abs(acc));
      }
  return worst;
}

namespace {

// F(X, xi) = g(X, xi) xi - sum_a g(X, J_a xi) J_a xi and its xi-derivative along eta.
struct XiRule {
  Mat g;
  std::array<Mat, 3> J;
  explicit XiRule(const QuaternionTriple& t) : g(to_double(t.g)) {
    for (int a = 0; a < 3; ++a) J[size_t(a)] = to_double(t.J[size_t(a)]);
  }
  Vec F(const Vec& x, const Vec& xi) const {
    Vec out = x.dot(g * xi) * xi;
    for (const Mat& j : J) out -= x.dot(g * (j * xi)) * (j * xi);
    return out;
  }
  Vec dF(const Vec& x, const Vec& xi, const Vec& eta) const {
    Vec out = x.dot(g * eta) * xi + x.dot(g * xi) * eta;
    for (const Mat& j : J) out -= x.dot(g * (j * eta)) * (j * xi) + x.dot(g * (j * xi)) * (j * eta);
    return out;
  }
};

}  // namespace

Vec qk_nabla_xi(const QuaternionTriple& t, const Vec& xi, const Vec& x) { return XiRule(t).F(x, xi); }

Vec qk_xi_curvature(const QuaternionTriple& t, const Vec& xi, const Vec& x, const Vec& y) {
  const XiRule r(t);
  // nabla_X (F(Y, xi)) = dF(Y, xi)[F(X, xi)] for parallel X, Y.
  return r.dF(y, xi, r.F(x, xi)) - r.dF(x, xi, r.F(y, xi));
}

RVec lower_vector(const QuaternionTriple& t, const RVec& xi) { return mat_apply(t.g, xi); }

WedgeSystem wedge_system(const QuaternionTriple& t, const RVec& theta, int count) {
  if (count < 0 || count > 3) throw std::invalid_argument("between 0 and 3 complex structures");
  WedgeSystem s;
  s.theta = theta;
  s.constraints.push_back(theta);
  for (int a = 0; a < count; ++a) s.constraints.push_back(mat_apply(transpose(t.J[size_t(a)]), theta));
  return s;
}

int constraint_rank(const WedgeSystem& s) {
  RationalMatrix m;
  for (const RVec& c : s.constraints) m.append_row(c);
  return m.rank();
}

int wedge_kernel_dimension(const WedgeSystem& s) {
  const int D = int(s.theta.size());
  std::vector<int> col(size_t(D) * D, -1);
  int ncols = 0;
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) col[size_t(i) * D + j] = ncols++;
  RationalMatrix m(0, ncols);
  for (const RVec& c : s.constraints)
    for (int i = 0; i < D; ++i)
      for (int j = i + 1; j < D; ++j)
        for (int k = j + 1; k < D; ++k) {
          // (c ^ F)_{ijk} = c_i F_jk - c_j F_ik + c_k F_ij
          RVec row(static_cast<size_t>(ncols));
          row[size_t(col[size_t(j) * D + k])] += c[size_t(i)];
          row[size_t(col[size_t(i) * D + k])] -= c[size_t(j)];
          row[size_t(col[size_t(i) * D + j])] += c[size_t(k)];
          bool zero = true;
          for (const Rational& v : row) zero = zero && v == 0;
          if (!zero) m.append_row(row);
        }
  return ncols - (m.rows() == 0 ? 0 : m.rank());
}

FlatnessReport flatness_report(int p, int q, const RVec& xi) {
  const QuaternionTriple t = build_flat_model(p, q);
  const int D = t.dim();
  if (int(xi.size()) != D) throw std::invalid_argument("xi has the wrong dimension");
  FlatnessReport r;
  r.p = p;
  r.q = q;
  r.metric_nondegenerate = t.g.rank() == D;
  const RVec th = lower_vector(t, xi);
  Rational norm = 0;
  bool nonzero = false;
  for (int i = 0; i < D; ++i) {
    norm += xi[size_t(i)] * th[size_t(i)];
    nonzero = nonzero || xi[size_t(i)] != 0;
  }
  r.xi_isotropic = nonzero && norm == 0;
  // Unknown nu, one equation nu * theta_i = 0 per coordinate.
  RationalMatrix nu(0, 1);
  for (int i = 0; i < D; ++i) nu.append_row(RVec(1, th[size_t(i)]));
  r.nu_forced_zero = nu.nullspace().empty();

  const WedgeSystem full = wedge_system(t, th, 3);
  r.constraint_rank = constraint_rank(full);
  r.kernel_full = wedge_kernel_dimension(full);
  r.kernel_theta_only = wedge_kernel_dimension(wedge_system(t, th, 0));
  r.kernel_two_constraints = wedge_kernel_dimension(wedge_system(t, th, 1));
  const bool valid = r.metric_nondegenerate && r.xi_isotropic;
  r.forces_flat = valid && r.nu_forced_zero && r.kernel_full == 0;
  r.hyperkahler_forces_flat = valid && r.kernel_full == 0;
  r.control_forces_flat = valid && r.nu_forced_zero && r.kernel_two_constraints == 0;
  return r;
}

}  // namespace pwlab
