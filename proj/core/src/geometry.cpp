#include "pwlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwlab {

namespace {

const std::vector<Variance> kUpLowLowLow = {Variance::Upper, Variance::Lower, Variance::Lower,
                                            Variance::Lower};

}  // namespace

LocalGeometry::LocalGeometry(const MetricModel& model, const Point& p, GeometryLevel level)
    : dim_(model.dim()), level_(level), p_(p), jet_(model.jet(p, int(level))) {
  build_connection();
  if (level_ >= GeometryLevel::Curvature) build_curvature();
  if (level_ >= GeometryLevel::CurvatureDerivative) build_curvature_derivative();
}

void LocalGeometry::build_connection() {
  const int D = dim_;
  const int na = jet_.na();
  const auto& slot = jet_.slot_of;
  auto dg = [&](int k, int i, int j) { return slot[k] < 0 ? 0.0 : jet_.dg(slot[k], i, j); };

  std::vector<double> low(size_t(D) * D * D);
  for (int m = 0; m < D; ++m)
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) {
        const double v = 0.5 * (dg(i, m, j) + dg(j, m, i) - dg(m, i, j));
        low[idx3(m, i, j)] = low[idx3(m, j, i)] = v;
      }
  gamma_.assign(size_t(D) * D * D, 0.0);
  for (int l = 0; l < D; ++l)
    for (int m = 0; m < D; ++m) {
      const double gi = jet_.ginv(l, m);
      if (gi == 0.0) continue;
      for (int ij = 0; ij < D * D; ++ij) gamma_[size_t(l) * D * D + ij] += gi * low[size_t(m) * D * D + ij];
    }

  if (level_ < GeometryLevel::Curvature) return;

  // d_a g^{-1} = -g^{-1} (d_a g) g^{-1}
  std::vector<Mat> dG(static_cast<size_t>(na)), dGinv(static_cast<size_t>(na));
  for (int a = 0; a < na; ++a) {
    dG[size_t(a)] = Mat(D, D);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) dG[size_t(a)](i, j) = jet_.dg(a, i, j);
    dGinv[size_t(a)] = -jet_.ginv * dG[size_t(a)] * jet_.ginv;
  }
  auto ddg = [&](int a, int k, int i, int j) {
    return slot[k] < 0 ? 0.0 : jet_.ddg(a, slot[k], i, j);
  };
  std::vector<std::vector<double>> dlow(size_t(na), std::vector<double>(size_t(D) * D * D));
  for (int a = 0; a < na; ++a)
    for (int m = 0; m < D; ++m)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          dlow[size_t(a)][idx3(m, i, j)] = 0.5 * (ddg(a, i, m, j) + ddg(a, j, m, i) - ddg(a, m, i, j));

  const size_t G3 = size_t(D) * D * D;
  dgamma_.assign(size_t(na) * G3, 0.0);
  for (int a = 0; a < na; ++a) {
    double* out = &dgamma_[size_t(a) * G3];
    for (int l = 0; l < D; ++l)
      for (int m = 0; m < D; ++m) {
        const double gi = jet_.ginv(l, m);
        const double dgi = dGinv[size_t(a)](l, m);
        if (gi == 0.0 && dgi == 0.0) continue;
        for (int ij = 0; ij < D * D; ++ij)
          out[size_t(l) * D * D + ij] += dgi * low[size_t(m) * D * D + ij] +
                                         gi * dlow[size_t(a)][size_t(m) * D * D + ij];
      }
  }

  if (level_ < GeometryLevel::CurvatureDerivative) return;

  auto dddg = [&](int a, int b, int k, int i, int j) {
    return slot[k] < 0 ? 0.0 : jet_.dddg(a, b, slot[k], i, j);
  };
  ddgamma_.assign(size_t(na) * na * G3, 0.0);
  std::vector<double> ddlow(G3);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      Mat ddG(D, D);
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) ddG(i, j) = jet_.ddg(a, b, i, j);
      const Mat ddGinv = -(dGinv[size_t(b)] * dG[size_t(a)] * jet_.ginv + jet_.ginv * ddG * jet_.ginv +
                           jet_.ginv * dG[size_t(a)] * dGinv[size_t(b)]);
      for (int m = 0; m < D; ++m)
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j)
            ddlow[idx3(m, i, j)] = 0.5 * (dddg(a, b, i, m, j) + dddg(a, b, j, m, i) - dddg(a, b, m, i, j));
      double* out = &ddgamma_[(size_t(a) * na + b) * G3];
      for (int l = 0; l < D; ++l)
        for (int m = 0; m < D; ++m) {
          const double c0 = ddGinv(l, m), ca = dGinv[size_t(a)](l, m), cb = dGinv[size_t(b)](l, m),
                       gi = jet_.ginv(l, m);
          if (c0 == 0.0 && ca == 0.0 && cb == 0.0 && gi == 0.0) continue;
          for (int ij = 0; ij < D * D; ++ij) {
            const size_t q = size_t(m) * D * D + ij;
            out[size_t(l) * D * D + ij] += c0 * low[q] + ca * dlow[size_t(b)][q] +
                                           cb * dlow[size_t(a)][q] + gi * ddlow[q];
          }
        }
    }
}

double LocalGeometry::dgamma(int k, int l, int i, int j) const {
  const int a = jet_.slot_of[size_t(k)];
  if (a < 0) return 0.0;
  return dgamma_[size_t(a) * dim_ * dim_ * dim_ + idx3(l, i, j)];
}

void LocalGeometry::build_curvature() {
  const int D = dim_;
  riemann_up_ = TensorValue(D, kUpLowLowLow);
  for (int r = 0; r < D; ++r)
    for (int s = 0; s < D; ++s)
      for (int m = 0; m < D; ++m)
        for (int n = m + 1; n < D; ++n) {
          double v = dgamma(m, r, n, s) - dgamma(n, r, m, s);
          for (int a = 0; a < D; ++a) v += gamma(r, m, a) * gamma(a, n, s) - gamma(r, n, a) * gamma(a, m, s);
          riemann_up_(r, s, m, n) = v;
          riemann_up_(r, s, n, m) = -v;
        }
  riemann_ = TensorValue::covariant(D, 4);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int s = 0; s < D; ++s)
        for (int l = 0; l < D; ++l) {
          double v = 0.0;
          for (int r = 0; r < D; ++r) v += jet_.g(l, r) * riemann_up_(r, s, m, n);
          riemann_(m, n, s, l) = v;
        }
}

void LocalGeometry::build_curvature_derivative() {
  const int D = dim_;
  const int na = jet_.na();
  const size_t G3 = size_t(D) * D * D;
  auto dG = [&](int a, int l, int i, int j) { return dgamma_[size_t(a) * G3 + idx3(l, i, j)]; };
  auto ddG = [&](int a, int k, int l, int i, int j) {
    const int b = jet_.slot_of[size_t(k)];
    return b < 0 ? 0.0 : ddgamma_[(size_t(a) * na + b) * G3 + idx3(l, i, j)];
  };

  // partial_k R_{mnsl} for active k, stored densely over all k (zero if inactive)
  TensorValue dR = TensorValue::covariant(D, 5);
  TensorValue dRup(D, kUpLowLowLow);
  for (int a = 0; a < na; ++a) {
    const int k = jet_.active[size_t(a)];
    for (int r = 0; r < D; ++r)
      for (int s = 0; s < D; ++s)
        for (int m = 0; m < D; ++m)
          for (int n = m + 1; n < D; ++n) {
            double v = ddG(a, m, r, n, s) - ddG(a, n, r, m, s);
            for (int al = 0; al < D; ++al)
              v += dG(a, r, m, al) * gamma(al, n, s) + gamma(r, m, al) * dG(a, al, n, s) -
                   dG(a, r, n, al) * gamma(al, m, s) - gamma(r, n, al) * dG(a, al, m, s);
            dRup(r, s, m, n) = v;
            dRup(r, s, n, m) = -v;
          }
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int s = 0; s < D; ++s)
          for (int l = 0; l < D; ++l) {
            double v = 0.0;
            for (int r = 0; r < D; ++r)
              v += jet_.dg(a, l, r) * riemann_up_(r, s, m, n) + jet_.g(l, r) * dRup(r, s, m, n);
            dR(k, m, n, s, l) = v;
          }
  }

  nabla_riemann_ = TensorValue::covariant(D, 5);
  const TensorValue& R = riemann_;
  for (int k = 0; k < D; ++k)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int s = 0; s < D; ++s)
          for (int l = 0; l < D; ++l) {
            double v = dR(k, m, n, s, l);
            for (int al = 0; al < D; ++al)
              v -= gamma(al, k, m) * R(al, n, s, l) + gamma(al, k, n) * R(m, al, s, l) +
                   gamma(al, k, s) * R(m, n, al, l) + gamma(al, k, l) * R(m, n, s, al);
            nabla_riemann_(k, m, n, s, l) = v;
          }
}

TensorValue LocalGeometry::christoffel() const {
  TensorValue t(dim_, {Variance::Upper, Variance::Lower, Variance::Lower});
  t.data() = gamma_;
  return t;
}

const TensorValue& LocalGeometry::riemann_up() const {
  if (level_ < GeometryLevel::Curvature) throw std::logic_error("curvature not computed at this level");
  return riemann_up_;
}

const TensorValue& LocalGeometry::riemann() const {
  if (level_ < GeometryLevel::Curvature) throw std::logic_error("curvature not computed at this level");
  return riemann_;
}

const TensorValue& LocalGeometry::nabla_riemann() const {
  if (level_ < GeometryLevel::CurvatureDerivative)
    throw std::logic_error("curvature derivative not computed at this level");
  return nabla_riemann_;
}

Mat LocalGeometry::covariant_derivative_covector(const Vec& theta, const Mat& dtheta) const {
  Mat out = dtheta;
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) out(k, j) -= gamma(l, k, j) * theta[l];
  return out;
}

Mat LocalGeometry::covariant_derivative_vector(const Vec& x, const Mat& dx) const {
  Mat out = dx;
  for (int k = 0; k < dim_; ++k)
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) out(k, j) += gamma(j, k, l) * x[l];
  return out;
}

TensorValue ricci(const LocalGeometry& geo) {
  const int D = geo.dim();
  const TensorValue& Ru = geo.riemann_up();
  TensorValue r = TensorValue::covariant(D, 2);
  // Ric(d_n, d_s) = trace of X -> R(X, d_n) d_s
  for (int n = 0; n < D; ++n)
    for (int s = 0; s < D; ++s) {
      double v = 0.0;
      for (int m = 0; m < D; ++m) v += Ru(m, s, m, n);
      r(n, s) = v;
    }
  return r;
}

double riemann_symmetry_defect(const LocalGeometry& geo) {
  const int D = geo.dim();
  const TensorValue& R = geo.riemann();
  double worst = 0.0;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        for (int d = 0; d < D; ++d) {
          const double v = R(a, b, c, d);
          worst = std::max({worst, std::abs(v + R(b, a, c, d)), std::abs(v + R(a, b, d, c)),
                            std::abs(v - R(c, d, a, b)),
                            std::abs(v + R(b, c, a, d) + R(c, a, b, d))});
        }
  return worst;
}

double second_bianchi_defect(const LocalGeometry& geo) {
  const int D = geo.dim();
  const TensorValue& N = geo.nabla_riemann();
  double worst = 0.0;
  for (int k = 0; k < D; ++k)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int s = 0; s < D; ++s)
          for (int l = 0; l < D; ++l)
            worst = std::max(worst, std::abs(N(k, m, n, s, l) + N(m, n, k, s, l) + N(n, k, m, s, l)));
  return worst;
}

Mat curvature_operator(const LocalGeometry& geo, const Vec& x, const Vec& y) {
  const int D = geo.dim();
  const TensorValue& Ru = geo.riemann_up();
  Mat out = Mat::Zero(D, D);
  for (int r = 0; r < D; ++r)
    for (int s = 0; s < D; ++s) {
      double v = 0.0;
      for (int m = 0; m < D; ++m) {
        if (x[m] == 0.0) continue;
        for (int n = 0; n < D; ++n) v += x[m] * y[n] * Ru(r, s, m, n);
      }
      out(r, s) = v;
    }
  return out;
}

Mat jacobi_operator(const LocalGeometry& geo, const Vec& x) {
  const int D = geo.dim();
  const TensorValue& Ru = geo.riemann_up();
  Mat out = Mat::Zero(D, D);
  // (J(X) d_m)^r = R(d_m, X) X = R^r_{s m n} X^n X^s
  for (int r = 0; r < D; ++r)
    for (int m = 0; m < D; ++m) {
      double v = 0.0;
      for (int s = 0; s < D; ++s) {
        if (x[s] == 0.0) continue;
        for (int n = 0; n < D; ++n) v += Ru(r, s, m, n) * x[n] * x[s];
      }
      out(r, m) = v;
    }
  return out;
}

namespace {

TensorValue raise_all(TensorValue t, const Mat& ginv) {
  for (int k = 0; k < t.rank(); ++k) t = raise_index(t, k, ginv);
  return t;
}

double full_contract(const TensorValue& a, const TensorValue& b) {
  double v = 0.0;
  for (size_t k = 0; k < a.size(); ++k) v += a.data()[k] * b.data()[k];
  return v;
}

}  // namespace

std::vector<ScalarInvariant> scalar_invariants(const LocalGeometry& geo, int order,
                                               const Vec* theta, const Mat* dtheta) {
  if (order < 0 || order > 2) throw std::invalid_argument("invariant order must be 0, 1 or 2");
  const int D = geo.dim();
  const Mat& gi = geo.ginv();
  std::vector<ScalarInvariant> out;

  const TensorValue& R = geo.riemann();
  const TensorValue Rup = raise_all(R, gi);
  out.push_back({"kretschmann", 0, full_contract(R, Rup)});
  const TensorValue ric = ricci(geo);
  const TensorValue ricup = raise_all(ric, gi);
  out.push_back({"ricci_squared", 0, full_contract(ric, ricup)});
  double scal = 0.0;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) scal += gi(a, b) * ric(a, b);
  out.push_back({"scalar_curvature", 0, scal});
  if (order == 0) return out;

  const TensorValue& N = geo.nabla_riemann();
  const TensorValue Nup = raise_all(N, gi);
  out.push_back({"nabla_riemann_squared", 1, full_contract(N, Nup)});

  // v_e = R^{abcd} nabla_e R_{abcd}
  Vec v = Vec::Zero(D);
  const size_t r4 = Rup.size();
  for (int e = 0; e < D; ++e) {
    double acc = 0.0;
    for (size_t q = 0; q < r4; ++q) acc += Rup.data()[q] * N.data()[size_t(e) * r4 + q];
    v[e] = acc;
  }
  out.push_back({"riemann_dot_nabla_riemann_squared", 1, v.dot(gi * v)});

  // div_{bcd} = g^{ea} nabla_e R_{abcd}
  TensorValue div = TensorValue::covariant(D, 3);
  for (int b = 0; b < D; ++b)
    for (int c = 0; c < D; ++c)
      for (int d = 0; d < D; ++d) {
        double acc = 0.0;
        for (int e = 0; e < D; ++e)
          for (int a = 0; a < D; ++a) acc += gi(e, a) * N(e, a, b, c, d);
        div(b, c, d) = acc;
      }
  out.push_back({"divergence_riemann_squared", 1, full_contract(div, raise_all(div, gi))});
  if (order == 1) return out;

  // second covariant derivative from the recurrence
  const double scale = std::max(1.0, N.max_abs());
  TensorValue NN = TensorValue::covariant(D, 6);
  if (N.max_abs() <= 1e-12) {
    // symmetric point: nabla^2 R = 0
  } else {
    if (!theta || !dtheta)
      throw std::domain_error("order-2 invariants need the recurrence form theta");
    double rec = 0.0;
    for (int k = 0; k < D; ++k)
      for (size_t q = 0; q < r4; ++q)
        rec = std::max(rec, std::abs(N.data()[size_t(k) * r4 + q] - 4.0 * (*theta)[k] * R.data()[q]));
    if (rec > 1e-9 * scale)
      throw std::domain_error("order-2 invariants need nabla R = 4 theta (x) R at the point");
    const Mat nth = geo.covariant_derivative_covector(*theta, *dtheta);
    for (int f = 0; f < D; ++f)
      for (int e = 0; e < D; ++e)
        for (size_t q = 0; q < r4; ++q)
          NN.data()[(size_t(f) * D + e) * r4 + q] =
              4.0 * nth(f, e) * R.data()[q] + 4.0 * (*theta)[e] * N.data()[size_t(f) * r4 + q];
  }
  out.push_back({"nabla2_riemann_squared", 2, full_contract(NN, raise_all(NN, gi))});
  double box = 0.0;
  for (int f = 0; f < D; ++f)
    for (int e = 0; e < D; ++e) {
      if (gi(f, e) == 0.0) continue;
      for (size_t q = 0; q < r4; ++q) box += gi(f, e) * NN.data()[(size_t(f) * D + e) * r4 + q] * Rup.data()[q];
    }
  out.push_back({"riemann_dot_box_riemann", 2, box});
  return out;
}

TensorValue christoffel(const MetricSpec& spec, const Point& p) {
  return LocalGeometry(ComplexWaveMetric(spec), p, GeometryLevel::Connection).christoffel();
}

TensorValue riemann(const MetricSpec& spec, const Point& p) {
  return LocalGeometry(ComplexWaveMetric(spec), p, GeometryLevel::Curvature).riemann();
}

TensorValue ricci(const MetricSpec& spec, const Point& p) {
  return ricci(LocalGeometry(ComplexWaveMetric(spec), p, GeometryLevel::Curvature));
}

TensorValue nabla_riemann(const MetricSpec& spec, const Point& p) {
  return LocalGeometry(ComplexWaveMetric(spec), p, GeometryLevel::CurvatureDerivative).nabla_riemann();
}

Mat jacobi_operator(const MetricSpec& spec, const Point& p, const Vec& x) {
  return jacobi_operator(LocalGeometry(ComplexWaveMetric(spec), p, GeometryLevel::Curvature), x);
}

TensorValue christoffel_finite_difference(const MetricModel& model, const Point& p, double h) {
  const int D = model.dim();
  const Mat g = model.jet(p, 0).g;
  const Mat gi = g.inverse();
  std::vector<Mat> dg(size_t(D), Mat::Zero(D, D));
  for (int k = 0; k < D; ++k) {
    auto at = [&](double s) {
      Point q = p;
      q[k] += s;
      return model.jet(q, 0).g;
    };
    dg[size_t(k)] = (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
  }
  TensorValue t(D, {Variance::Upper, Variance::Lower, Variance::Lower});
  for (int l = 0; l < D; ++l)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        double v = 0.0;
        for (int m = 0; m < D; ++m)
          v += gi(l, m) * 0.5 * (dg[size_t(i)](m, j) + dg[size_t(j)](m, i) - dg[size_t(m)](i, j));
        t(l, i, j) = v;
      }
  return t;
}

}  // namespace pwlab
