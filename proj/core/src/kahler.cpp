#include "pwlab/kahler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwlab/curves.hpp"

namespace pwlab {

Mat standard_J(int n) {
  const int D = 2 * n + 4;
  Mat j = Mat::Zero(D, D);
  for (int k = 0; k < D; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return j;
}

XiTheta xi_and_theta(const MetricSpec& spec, const Point& p) {
  const int D = spec.dim();
  const double w1 = p[coord::w1], w2 = p[coord::w2];
  const double r2 = w1 * w1 + w2 * w2;
  if (r2 == 0.0) throw DomainError("xi is undefined on w1 = w2 = 0");
  XiTheta out;
  out.xi = Vec::Zero(D);
  out.xi[coord::z1] = -w1 / r2;
  out.xi[coord::z2] = -w2 / r2;
  out.dxi = Mat::Zero(D, D);
  const double w[2] = {w1, w2};
  const int zs[2] = {coord::z1, coord::z2};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      out.dxi(k, zs[i]) = -(k == i ? 1.0 : 0.0) / r2 + 2.0 * w[i] * w[k] / (r2 * r2);

  // theta_j = g_jm xi^m, differentiated by the product rule.
  const ComplexWaveMetric model(spec);
  const MetricJet jet = model.jet(p, 1);
  out.theta = jet.g * out.xi;
  out.dtheta = Mat::Zero(D, D);
  for (int a = 0; a < jet.na(); ++a) {
    const int k = jet.active[size_t(a)];
    for (int j = 0; j < D; ++j) {
      double acc = 0.0;
      for (int m = 0; m < D; ++m) acc += jet.dg(a, j, m) * out.xi[m] + jet.g(j, m) * out.dxi(k, m);
      out.dtheta(k, j) = acc;
    }
  }
  return out;
}

double max_residual(const ResidualList& r) {
  double m = 0.0;
  for (const auto& e : r) m = std::max(m, e.second);
  return m;
}

HomogeneousStructure::HomogeneousStructure(const MetricSpec& spec, const Point& p)
    : geo_(ComplexWaveMetric(spec), p, GeometryLevel::CurvatureDerivative),
      J_(standard_J(spec.n)),
      xt_(xi_and_theta(spec, p)) {
  const int D = dim();
  const MetricJet& jet = geo_.jet();
  const Mat& g = jet.g;
  const Vec& xi = xt_.xi;
  const Vec& th = xt_.theta;
  const Vec jxi = J_ * xi;
  const Vec thj = J_.transpose() * th;  // (theta o J)_j = theta_m J^m_j
  const Mat omega = g * J_;              // omega(i, j) = g(d_i, J d_j)

  S_.assign(size_t(D) * D * D, 0.0);
  for (int l = 0; l < D; ++l)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        S_[idx3(l, i, j)] = g(i, j) * xi[l] - th[j] * (l == i ? 1.0 : 0.0) - omega(i, j) * jxi[l] +
                            thj[j] * J_(l, i);

  dS_.assign(size_t(D) * S_.size(), 0.0);
  for (int a = 0; a < jet.na(); ++a) {
    const int k = jet.active[size_t(a)];
    const Vec dxi = xt_.dxi.row(k).transpose();
    const Vec djxi = J_ * dxi;
    const Vec dth = xt_.dtheta.row(k).transpose();
    const Vec dthj = J_.transpose() * dth;
    Mat dg(D, D);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) dg(i, j) = jet.dg(a, i, j);
    const Mat domega = dg * J_;
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
          dS_[size_t(k) * S_.size() + idx3(l, i, j)] =
              dg(i, j) * xi[l] + g(i, j) * dxi[l] - dth[j] * (l == i ? 1.0 : 0.0) -
              domega(i, j) * jxi[l] - omega(i, j) * djxi[l] + dthj[j] * J_(l, i);
  }
}

TensorValue HomogeneousStructure::tensor() const {
  TensorValue t(dim(), {Variance::Upper, Variance::Lower, Variance::Lower});
  t.data() = S_;
  return t;
}

TensorValue HomogeneousStructure::lowered() const {
  const int D = dim();
  TensorValue t = TensorValue::covariant(D, 3);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k) {
        double acc = 0.0;
        for (int l = 0; l < D; ++l) acc += S(l, i, j) * geo_.g()(l, k);
        t(i, j, k) = acc;
      }
  return t;
}

ResidualList canonical_residuals(const LocalGeometry& geo, const TensorValue& S, const TensorValue& dS) {
  const int D = geo.dim();
  const TensorValue& R = geo.riemann();
  const TensorValue& NR = geo.nabla_riemann();
  const Mat& g = geo.g();
  ResidualList out;

  // (nabla~ g)_{kij} = g(S_k d_i, d_j) + g(d_i, S_k d_j)
  double rg = 0.0;
  for (int k = 0; k < D; ++k)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) {
        double acc = 0.0;
        for (int p = 0; p < D; ++p) acc += S(p, k, i) * g(p, j) + S(p, k, j) * g(i, p);
        rg = std::max(rg, std::abs(acc));
      }
  out.emplace_back("metric", rg);

  // (nabla~_k R)_{mnsl} = nabla_k R_{mnsl} + sum over slots of R(.., S_k(slot), ..)
  double rr = 0.0;
  for (int k = 0; k < D; ++k)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int s = 0; s < D; ++s)
          for (int l = 0; l < D; ++l) {
            double acc = NR(k, m, n, s, l);
            for (int p = 0; p < D; ++p)
              acc += S(p, k, m) * R(p, n, s, l) + S(p, k, n) * R(m, p, s, l) + S(p, k, s) * R(m, n, p, l) +
                     S(p, k, l) * R(m, n, s, p);
            rr = std::max(rr, std::abs(acc));
          }
  out.emplace_back("curvature", rr);

  // (nabla~_k S)^l_{ij} = nabla_k S^l_{ij} - S^l_{kp} S^p_{ij} + S^p_{ki} S^l_{pj} + S^l_{ip} S^p_{kj}
  double rs = 0.0;
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
          double acc = dS(k, l, i, j);
          for (int p = 0; p < D; ++p) {
            acc += geo.gamma(l, k, p) * S(p, i, j) - geo.gamma(p, k, i) * S(l, p, j) -
                   geo.gamma(p, k, j) * S(l, i, p);
            acc += -S(l, k, p) * S(p, i, j) + S(p, k, i) * S(l, p, j) + S(l, i, p) * S(p, k, j);
          }
          rs = std::max(rs, std::abs(acc));
        }
  out.emplace_back("structure", rs);
  return out;
}

ResidualList HomogeneousStructure::ambrose_singer_residuals() const {
  const int D = dim();
  TensorValue dst(D, {Variance::Lower, Variance::Upper, Variance::Lower, Variance::Lower});
  dst.data() = dS_;
  ResidualList out = canonical_residuals(geo_, tensor(), dst);

  // (nabla~_k J)^l_j = Gamma^l_{kp} J^p_j - Gamma^p_{kj} J^l_p - (S_k J - J S_k)^l_j
  double rj = 0.0;
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      for (int j = 0; j < D; ++j) {
        double acc = 0.0;
        for (int p = 0; p < D; ++p)
          acc += geo_.gamma(l, k, p) * J_(p, j) - geo_.gamma(p, k, j) * J_(l, p) - S(l, k, p) * J_(p, j) +
                 J_(l, p) * S(p, k, j);
        rj = std::max(rj, std::abs(acc));
      }
  out.emplace_back("complex_structure", rj);

  // nabla~_k xi^l = d_k xi^l + Gamma^l_{kp} xi^p - S^l_{kp} xi^p
  const Mat nxi = geo_.covariant_derivative_vector(xt_.xi, xt_.dxi);
  double rx = 0.0;
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l) {
      double acc = nxi(k, l);
      for (int p = 0; p < D; ++p) acc -= S(l, k, p) * xt_.xi[p];
      rx = std::max(rx, std::abs(acc));
    }
  out.emplace_back("xi", rx);

  // nabla~_k theta_j = nabla_k theta_j + S^p_{kj} theta_p
  const Mat nth = geo_.covariant_derivative_covector(xt_.theta, xt_.dtheta);
  double rt = 0.0;
  for (int k = 0; k < D; ++k)
    for (int j = 0; j < D; ++j) {
      double acc = nth(k, j);
      for (int p = 0; p < D; ++p) acc += S(p, k, j) * xt_.theta[p];
      rt = std::max(rt, std::abs(acc));
    }
  out.emplace_back("theta", rt);
  return out;
}

ResidualList HomogeneousStructure::lemma_identities() const {
  const int D = dim();
  const Vec& th = xt_.theta;
  const Vec thj = J_.transpose() * th;
  const TensorValue& R = geo_.riemann();
  const TensorValue& NR = geo_.nabla_riemann();
  ResidualList out;

  const Mat nth = geo_.covariant_derivative_covector(th, xt_.dtheta);
  out.emplace_back("nabla_theta", (nth - th * th.transpose() + thj * thj.transpose()).cwiseAbs().maxCoeff());

  auto wedge = [&](const Vec& f) {
    double worst = 0.0;
    for (int x = 0; x < D; ++x)
      for (int y = 0; y < D; ++y)
        for (int z = 0; z < D; ++z)
          for (int w = 0; w < D; ++w)
            for (int u = 0; u < D; ++u)
              worst = std::max(worst, std::abs(f[x] * R(y, z, w, u) + f[y] * R(z, x, w, u) + f[z] * R(x, y, w, u)));
    return worst;
  };
  out.emplace_back("theta_wedge_riemann", wedge(th));
  out.emplace_back("jtheta_wedge_riemann", wedge(thj));

  double rec = 0.0;
  const size_t r4 = R.size();
  for (int k = 0; k < D; ++k)
    for (size_t q = 0; q < r4; ++q)
      rec = std::max(rec, std::abs(NR.data()[size_t(k) * r4 + q] - 4.0 * th[k] * R.data()[q]));
  out.emplace_back("recurrence", rec);

  out.emplace_back("closed_theta", (xt_.dtheta - xt_.dtheta.transpose()).cwiseAbs().maxCoeff());
  return out;
}

ResidualList HomogeneousStructure::linear_type_residuals() const {
  const int D = dim();
  const Mat& g = geo_.g();
  const Mat& gi = geo_.ginv();
  const TensorValue Sl = lowered();
  ResidualList out;

  Vec trace = Vec::Zero(D);
  for (int z = 0; z < D; ++z)
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) trace[z] += gi(i, j) * Sl(i, j, z);
  const Vec t1 = trace / double(D);
  const Vec t1j = J_.transpose() * t1;
  const Mat omega = g * J_;

  double worst = 0.0;
  for (int x = 0; x < D; ++x)
    for (int y = 0; y < D; ++y)
      for (int z = 0; z < D; ++z) {
        const double model = g(x, y) * t1[z] - g(x, z) * t1[y] + omega(x, y) * t1j[z] - omega(x, z) * t1j[y];
        worst = std::max(worst, std::abs(Sl(x, y, z) - model));
      }
  out.emplace_back("linear_class", worst);
  out.emplace_back("trace_form_matches_theta", (t1 - xt_.theta).cwiseAbs().maxCoeff());
  out.emplace_back("xi_isotropic", std::abs(xt_.xi.dot(g * xt_.xi)));
  out.emplace_back("theta_of_xi", std::abs(xt_.theta.dot(xt_.xi)));
  out.emplace_back("jtheta_of_xi", std::abs(xt_.theta.dot(J_ * xt_.xi)));
  return out;
}

ResidualList complex_structure_residuals(const MetricSpec& spec, const Point& p) {
  const LocalGeometry geo(ComplexWaveMetric(spec), p, GeometryLevel::Connection);
  const int D = geo.dim();
  const Mat J = standard_J(spec.n);
  ResidualList out;
  out.emplace_back("square", (J * J + Mat::Identity(D, D)).cwiseAbs().maxCoeff());
  out.emplace_back("hermitian", (J.transpose() * geo.g() * J - geo.g()).cwiseAbs().maxCoeff());
  double nj = 0.0;
  for (int k = 0; k < D; ++k)
    for (int l = 0; l < D; ++l)
      for (int j = 0; j < D; ++j) {
        double acc = 0.0;
        for (int q = 0; q < D; ++q) acc += geo.gamma(l, k, q) * J(q, j) - geo.gamma(q, k, j) * J(l, q);
        nj = std::max(nj, std::abs(acc));
      }
  out.emplace_back("parallel", nj);
  return out;
}

WalkerReport walker_check(const MetricSpec& spec, const std::vector<Point>& samples) {
  WalkerReport rep;
  const ComplexWaveMetric model(spec);
  const int D = spec.dim();
  const int zs[2] = {coord::z1, coord::z2};
  for (const Point& p : samples) {
    const LocalGeometry geo(model, p, GeometryLevel::Connection);
    for (int a : zs)
      for (int b : zs) rep.null_defect = std::max(rep.null_defect, std::abs(geo.g()(a, b)));
    for (int k = 0; k < D; ++k)
      for (int a : zs)
        for (int l = 0; l < D; ++l)
          if (l != coord::z1 && l != coord::z2)
            rep.parallel_defect = std::max(rep.parallel_defect, std::abs(geo.gamma(l, k, a)));
  }
  if (!samples.empty()) {
    GeodesicState init;
    init.x = samples.front();
    init.v = Vec::Zero(D);
    init.v[coord::w1] = -0.5 * init.x[coord::w1];
    init.v[coord::w2] = -0.5 * init.x[coord::w2];
    if (init.v.norm() == 0.0) init.v[coord::w1] = 1.0;
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);
    const TransportResult tr = parallel_transport(model, init, {Vec::Unit(D, coord::z1), Vec::Unit(D, coord::z2)}, times);
    if (tr.status != IntegrationStatus::Completed) {
      rep.transport_defect = std::numeric_limits<double>::infinity();
    } else {
      for (const auto& s : tr.samples) {
        rep.transport_defect = std::max(rep.transport_defect, (s.frame[0] - Vec::Unit(D, coord::z1)).cwiseAbs().maxCoeff());
        rep.transport_defect = std::max(rep.transport_defect, (s.frame[1] - Vec::Unit(D, coord::z2)).cwiseAbs().maxCoeff());
      }
    }
  }
  return rep;
}

}  // namespace pwlab
