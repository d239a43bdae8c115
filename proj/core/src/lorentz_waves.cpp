#include "pwlab/lorentz_waves.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwlab/integrator.hpp"
#include "pwlab/jets.hpp"

namespace pwlab {

void PlaneWaveSpec::validate() const {
  if (n < 1) throw std::invalid_argument("plane wave needs n >= 1");
  if (matrices.empty()) throw std::invalid_argument("plane wave profile needs at least one matrix");
  if (kind != WaveProfileKind::Polynomial && matrices.size() != 1)
    throw std::invalid_argument("constant and scale-invariant profiles take exactly one matrix");
  for (const Mat& m : matrices) {
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("profile matrix must be n x n");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() != 0.0) throw std::invalid_argument("profile matrix must be symmetric");
  }
  if (!epsilons.empty()) {
    if (int(epsilons.size()) != n) throw std::invalid_argument("need one sign per transverse coordinate");
    for (int e : epsilons)
      if (e != 1 && e != -1) throw std::invalid_argument("signs must be +1 or -1");
  }
}

namespace {
PlaneWaveSpec make_wave(WaveProfileKind kind, std::vector<Mat> ms, std::vector<int> eps) {
  PlaneWaveSpec s;
  s.n = ms.empty() ? 0 : int(ms.front().rows());
  s.kind = kind;
  s.matrices = std::move(ms);
  s.epsilons = std::move(eps);
  s.validate();
  return s;
}
}  // namespace

PlaneWaveSpec constant_wave(const Mat& a, std::vector<int> epsilons) {
  return make_wave(WaveProfileKind::Constant, {a}, std::move(epsilons));
}
PlaneWaveSpec scale_invariant_wave(const Mat& b, std::vector<int> epsilons) {
  return make_wave(WaveProfileKind::ScaleInvariant, {b}, std::move(epsilons));
}
PlaneWaveSpec polynomial_wave(std::vector<Mat> coefficients, std::vector<int> epsilons) {
  return make_wave(WaveProfileKind::Polynomial, std::move(coefficients), std::move(epsilons));
}

Mat wave_profile(const PlaneWaveSpec& spec, double u, int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("profile derivatives go up to order 3");
  const Jet1 uj = Jet1::variable(u);
  switch (spec.kind) {
    case WaveProfileKind::Constant:
      return k == 0 ? spec.matrices[0] : Mat::Zero(spec.n, spec.n);
    case WaveProfileKind::ScaleInvariant:
      return pow(uj, -2).d(k) * spec.matrices[0];
    case WaveProfileKind::Polynomial: {
      Mat acc = Mat::Zero(spec.n, spec.n);
      for (size_t d = 0; d < spec.matrices.size(); ++d) acc += pow(uj, int(d)).d(k) * spec.matrices[d];
      return acc;
    }
  }
  return Mat::Zero(spec.n, spec.n);
}

PlaneWaveMetric::PlaneWaveMetric(PlaneWaveSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

MetricJet PlaneWaveMetric::jet(const Point& p, int order) const {
  const int n = spec_.n, D = dim();
  const double u = p[wave_coord::u];
  std::vector<int> active = {wave_coord::u};
  for (int a = 0; a < n; ++a) active.push_back(wave_coord::x(a));
  MetricJet j;
  j.allocate(D, order, active);
  const Vec x = p.tail(n);
  std::vector<Mat> A;
  for (int k = 0; k <= order; ++k) A.push_back(wave_profile(spec_, u, k));

  // d_u^k d_{x_c}... of g_uu = x^T A x, for k u-derivatives and the listed x slots.
  auto guu = [&](int k, const std::vector<int>& xs) -> double {
    switch (xs.size()) {
      case 0: return x.dot(A[size_t(k)] * x);
      case 1: return 2.0 * A[size_t(k)].row(xs[0]).dot(x);
      case 2: return 2.0 * A[size_t(k)](xs[0], xs[1]);
      default: return 0.0;
    }
  };
  auto split = [](std::initializer_list<int> slots) {
    int k = 0;
    std::vector<int> xs;
    for (int s : slots) {
      if (s == 0) ++k;
      else xs.push_back(s - 1);
    }
    return std::pair{k, xs};
  };

  const int U = wave_coord::u, V = wave_coord::v;
  j.g(U, V) = j.g(V, U) = 1.0;
  j.g(U, U) = guu(0, {});
  for (int a = 0; a < n; ++a) j.g(wave_coord::x(a), wave_coord::x(a)) = spec_.eps(a);
  const int na = j.na();
  for (int a = 0; a < na && order >= 1; ++a) {
    auto [k, xs] = split({a});
    j.dg(a, U, U) = guu(k, xs);
    for (int b = 0; b < na && order >= 2; ++b) {
      auto [k2, xs2] = split({a, b});
      j.ddg(a, b, U, U) = guu(k2, xs2);
      for (int c = 0; c < na && order >= 3; ++c) {
        auto [k3, xs3] = split({a, b, c});
        j.dddg(a, b, c, U, U) = guu(k3, xs3);
      }
    }
  }
  j.ginv = Mat::Zero(D, D);
  j.ginv(U, V) = j.ginv(V, U) = 1.0;
  j.ginv(V, V) = -j.g(U, U);
  for (int a = 0; a < n; ++a) j.ginv(wave_coord::x(a), wave_coord::x(a)) = spec_.eps(a);
  return j;
}

double PlaneWaveMetric::singular_distance(const Point& p) const {
  if (spec_.kind != WaveProfileKind::ScaleInvariant) return std::numeric_limits<double>::infinity();
  return std::abs(p[wave_coord::u]);
}

double PlaneWaveMetric::singular_approach_rate(const Point&, const Vec& v) const {
  return std::abs(v[wave_coord::u]);
}

std::vector<std::string> PlaneWaveMetric::coordinate_names() const {
  std::vector<std::string> names = {"u", "v"};
  for (int a = 1; a <= spec_.n; ++a) names.push_back("x" + std::to_string(a));
  return names;
}

TensorValue plane_wave_metric(const PlaneWaveSpec& spec, const Point& p) {
  return TensorValue::from_matrix(PlaneWaveMetric(spec).jet(p, 0).g, Variance::Lower, Variance::Lower);
}

OscillatorBasis::OscillatorBasis(PlaneWaveSpec spec, double u0, double tol)
    : spec_(std::move(spec)), u0_(u0), tol_(tol) {
  spec_.validate();
  wave_profile(spec_, u0_);
}

namespace {

// State: Phi (n x 2n) then Phi' (n x 2n), column-major.
OdeRhs oscillator_rhs(const PlaneWaveSpec& spec) {
  return [spec](const OdeState& s, OdeState& ds, double u) {
    const int n = spec.n, m = 2 * n * n;
    const Eigen::Map<const Mat> phi(s.data(), n, 2 * n), dphi(s.data() + m, n, 2 * n);
    Eigen::Map<Mat> out(ds.data(), n, 2 * n), dout(ds.data() + m, n, 2 * n);
    out = dphi;
    Mat acc = wave_profile(spec, u) * phi;
    for (int a = 0; a < n; ++a) acc.row(a) *= double(spec.eps(a));
    dout = acc;
  };
}

OdeState oscillator_initial(int n) {
  OdeState s(size_t(4 * n * n), 0.0);
  Eigen::Map<Mat> phi(s.data(), n, 2 * n), dphi(s.data() + 2 * n * n, n, 2 * n);
  phi.leftCols(n).setIdentity();
  dphi.rightCols(n).setIdentity();
  return s;
}

Mat wronskian_matrix(const PlaneWaveSpec& spec, const Mat& phi, const Mat& dphi) {
  Vec e(spec.n);
  for (int a = 0; a < spec.n; ++a) e[a] = spec.eps(a);
  const Mat w = phi.transpose() * e.asDiagonal() * dphi;
  return w - w.transpose();
}

void check_wave_domain(const PlaneWaveSpec& spec, double u0, double u1) {
  if (spec.kind == WaveProfileKind::ScaleInvariant && (u0 == 0.0 || u1 == 0.0 || (u0 > 0) != (u1 > 0)))
    throw DomainError("scale-invariant profile: the u-range must not reach u = 0");
}

}  // namespace

std::pair<Mat, Mat> OscillatorBasis::at(double u) const {
  check_wave_domain(spec_, u0_, u);
  const int n = spec_.n;
  OdeState s = oscillator_initial(n);
  IntegratorOptions io;
  io.abs_tol = tol_;
  io.rel_tol = tol_;
  io.initial_step = 1e-3;
  const IntegrationResult r = integrate_adaptive(oscillator_rhs(spec_), s, u0_, u, io);
  if (r.status != IntegrationStatus::Completed) throw std::runtime_error("oscillator integration failed: " + to_string(r.status));
  const Eigen::Map<const Mat> phi(s.data(), n, 2 * n), dphi(s.data() + 2 * n * n, n, 2 * n);
  return {Mat(phi), Mat(dphi)};
}

KillingField oscillator_field(const OscillatorBasis& basis, int column, const std::string& name) {
  const PlaneWaveSpec& spec = basis.spec();
  const int n = spec.n;
  Vec e(n);
  for (int a = 0; a < n; ++a) e[a] = spec.eps(a);
  KillingField k;
  k.name = name;
  k.kind = KillingKind::Oscillator;
  k.value = [basis, column, e, n](const Point& p) {
    const auto [phi, dphi] = basis.at(p[wave_coord::u]);
    const Vec x = p.tail(n);
    Vec out = Vec::Zero(n + 2);
    out.tail(n) = phi.col(column);
    out[wave_coord::v] = -(e.asDiagonal() * dphi.col(column)).dot(x);
    return out;
  };
  k.jacobian = [basis, column, e, n](const Point& p) {
    const double u = p[wave_coord::u];
    const auto [phi, dphi] = basis.at(u);
    // eps_a f_a'' = A_ab f_b
    const Vec eps_f2 = wave_profile(basis.spec(), u) * phi.col(column);
    const Vec x = p.tail(n);
    Mat j = Mat::Zero(n + 2, n + 2);
    j.block(2, wave_coord::u, n, 1) = dphi.col(column);
    j(wave_coord::v, wave_coord::u) = -eps_f2.dot(x);
    for (int a = 0; a < n; ++a) j(wave_coord::v, wave_coord::x(a)) = -e[a] * dphi(a, column);
    return j;
  };
  return k;
}

KillingField dv_field(int n) {
  return {"d_v", KillingKind::Dv, [n](const Point&) { return Vec(Vec::Unit(n + 2, wave_coord::v)); },
          [n](const Point&) { return Mat(Mat::Zero(n + 2, n + 2)); }};
}

KillingField du_field(int n) {
  return {"d_u", KillingKind::ExtraConstant, [n](const Point&) { return Vec(Vec::Unit(n + 2, wave_coord::u)); },
          [n](const Point&) { return Mat(Mat::Zero(n + 2, n + 2)); }};
}

KillingField dilation_field(int n) {
  return {"u d_u - v d_v", KillingKind::ExtraScaleInvariant,
          [n](const Point& p) {
            Vec out = Vec::Zero(n + 2);
            out[wave_coord::u] = p[wave_coord::u];
            out[wave_coord::v] = -p[wave_coord::v];
            return out;
          },
          [n](const Point&) {
            Mat j = Mat::Zero(n + 2, n + 2);
            j(wave_coord::u, wave_coord::u) = 1.0;
            j(wave_coord::v, wave_coord::v) = -1.0;
            return j;
          }};
}

KillingField translation_field(int n, int a) {
  return {"d_x" + std::to_string(a + 1), KillingKind::Translation,
          [n, a](const Point&) { return Vec(Vec::Unit(n + 2, wave_coord::x(a))); },
          [n](const Point&) { return Mat(Mat::Zero(n + 2, n + 2)); }};
}

std::vector<KillingField> oscillator_killing_fields(const PlaneWaveSpec& spec, double u0) {
  const OscillatorBasis basis(spec, u0);
  std::vector<KillingField> out = {dv_field(spec.n)};
  for (int a = 0; a < spec.n; ++a) out.push_back(oscillator_field(basis, a, "X_p" + std::to_string(a + 1)));
  for (int a = 0; a < spec.n; ++a) out.push_back(oscillator_field(basis, spec.n + a, "X_q" + std::to_string(a + 1)));
  if (spec.kind == WaveProfileKind::Constant) out.push_back(du_field(spec.n));
  if (spec.kind == WaveProfileKind::ScaleInvariant) out.push_back(dilation_field(spec.n));
  return out;
}

double killing_residual(const PlaneWaveSpec& spec, const KillingField& x, const std::vector<Point>& points) {
  const PlaneWaveMetric model(spec);
  const int D = spec.dim();
  double worst = 0.0;
  for (const Point& p : points) {
    const MetricJet j = model.jet(p, 1);
    const Vec X = x.value(p);
    const Mat J = x.jacobian(p);
    // (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k
    Mat lie = J.transpose() * j.g + j.g * J;
    for (int a = 0; a < j.na(); ++a)
      for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) lie(r, c) += X[j.active[size_t(a)]] * j.dg(a, r, c);
    worst = std::max(worst, lie.cwiseAbs().maxCoeff());
  }
  return worst;
}

HeisenbergTable heisenberg_table(const PlaneWaveSpec& spec, double u0, const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("heisenberg_table needs sample points");
  const int n = spec.n, D = spec.dim();
  const OscillatorBasis basis(spec, u0);
  std::vector<KillingField> fields = {dv_field(n)};
  for (int c = 0; c < 2 * n; ++c)
    fields.push_back(oscillator_field(basis, c, (c < n ? "X_p" : "X_q") + std::to_string(c % n + 1)));
  const int m = int(fields.size());
  HeisenbergTable t;
  for (const auto& f : fields) t.labels.push_back(f.name);
  Mat lo = Mat::Constant(m, m, std::numeric_limits<double>::infinity());
  Mat hi = Mat::Constant(m, m, -std::numeric_limits<double>::infinity());
  t.dv_coefficient = Mat::Zero(m, m);
  for (const Point& p : points) {
    std::vector<Vec> val;
    std::vector<Mat> jac;
    for (const auto& f : fields) {
      val.push_back(f.value(p));
      jac.push_back(f.jacobian(p));
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        // [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k
        Vec br = jac[size_t(j)] * val[size_t(i)] - jac[size_t(i)] * val[size_t(j)];
        const double c = br[wave_coord::v];
        br[wave_coord::v] = 0.0;
        t.transverse = std::max(t.transverse, br.cwiseAbs().maxCoeff());
        t.dv_coefficient(i, j) += c / double(points.size());
        lo(i, j) = std::min(lo(i, j), c);
        hi(i, j) = std::max(hi(i, j), c);
      }
  }
  t.variation = (hi - lo).maxCoeff();
  (void)D;
  const auto [phi, dphi] = basis.at(u0);
  t.wronskian = wronskian_matrix(spec, phi, dphi);
  return t;
}

double wronskian_drift(const PlaneWaveSpec& spec, double u0, double u1, double tol) {
  spec.validate();
  check_wave_domain(spec, u0, u1);
  const int n = spec.n, mm = 2 * n * n;
  OdeState s = oscillator_initial(n);
  Mat w0;
  double drift = 0.0;
  StepHooks hooks;
  hooks.observe = [&](const OdeState& st, double) {
    const Eigen::Map<const Mat> phi(st.data(), n, 2 * n), dphi(st.data() + mm, n, 2 * n);
    const Mat w = wronskian_matrix(spec, phi, dphi);
    if (w0.size() == 0) w0 = w;
    drift = std::max(drift, (w - w0).cwiseAbs().maxCoeff());
  };
  IntegratorOptions io;
  io.abs_tol = tol;
  io.rel_tol = tol;
  const IntegrationResult r = integrate_adaptive(oscillator_rhs(spec), s, u0, u1, io, hooks);
  if (r.status != IntegrationStatus::Completed) throw std::runtime_error("oscillator integration failed: " + to_string(r.status));
  return drift;
}

WaveCurvatureReport wave_curvature_and_symmetry(const PlaneWaveSpec& spec, const Point& p) {
  const PlaneWaveMetric model(spec);
  const LocalGeometry geo(model, p, GeometryLevel::CurvatureDerivative);
  const int n = spec.n, D = spec.dim();
  const int U = wave_coord::u;
  const Mat A = wave_profile(spec, p[U]);
  const TensorValue& R = geo.riemann();
  WaveCurvatureReport rep;
  rep.r_uaub = Mat(n, n);
  TensorValue pattern = TensorValue::covariant(D, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int xa = wave_coord::x(a), xb = wave_coord::x(b);
      rep.r_uaub(a, b) = R(U, xb, xa, U);
      // riemann(m, n, s, l) = g(R(d_m, d_n) d_s, d_l) = A_ab on (u, a, u, b)
      pattern(U, xa, U, xb) = A(a, b);
      pattern(xa, U, U, xb) = -A(a, b);
      pattern(U, xa, xb, U) = -A(a, b);
      pattern(xa, U, xb, U) = A(a, b);
    }
  rep.profile_defect = (rep.r_uaub + A).cwiseAbs().maxCoeff();
  rep.other_components = (R - pattern).max_abs();
  rep.nabla_r = geo.nabla_riemann().max_abs();
  const Mat ric = ricci(geo).as_matrix();
  rep.ricci_uu = ric(U, U);
  Mat rest = ric;
  rest(U, U) = 0.0;
  rep.ricci_other = rest.cwiseAbs().maxCoeff();
  for (const ScalarInvariant& s : scalar_invariants(geo, 0)) {
    if (s.name == "kretschmann") rep.kretschmann = s.value;
    if (s.name == "ricci_squared") rep.ricci_squared = s.value;
  }
  return rep;
}

double SsiReport::max() const { return std::max(max_residual(residuals), xi_norm); }

SsiReport ssi_structure_check(const PlaneWaveSpec& spec, const std::vector<Point>& points) {
  if (spec.kind != WaveProfileKind::ScaleInvariant) throw std::invalid_argument("ssi_structure_check needs a scale-invariant profile");
  const PlaneWaveMetric model(spec);
  const int D = spec.dim();
  const int U = wave_coord::u, V = wave_coord::v;
  SsiReport rep;
  for (const Point& p : points) {
    const LocalGeometry geo(model, p, GeometryLevel::CurvatureDerivative);
    const MetricJet& j = geo.jet();
    const double u = p[U];
    if (u == 0.0) throw DomainError("u = 0 is outside the scale-invariant domain");
    Vec xi = Vec::Zero(D), dxi_u = Vec::Zero(D);
    xi[V] = -1.0 / u;
    dxi_u[V] = 1.0 / (u * u);
    const Vec th = j.g * xi;  // g(xi, .)
    // d_k g(xi, .)_j = d_k g_jv xi^v + g_jv d_k xi^v; g_jv is constant.
    Mat dth = Mat::Zero(D, D);
    dth.row(U) = (j.g * dxi_u).transpose();

    TensorValue S(D, {Variance::Upper, Variance::Lower, Variance::Lower});
    TensorValue dS(D, {Variance::Lower, Variance::Upper, Variance::Lower, Variance::Lower});
    for (int l = 0; l < D; ++l)
      for (int i = 0; i < D; ++i)
        for (int k = 0; k < D; ++k) {
          // S^l_{ij} = g_ij xi^l - theta_j delta^l_i
          S(l, i, k) = j.g(i, k) * xi[l] - (l == i ? th[k] : 0.0);
          for (int q = 0; q < D; ++q) {
            const int slot = j.slot_of[size_t(q)];
            const double dg = slot < 0 ? 0.0 : j.dg(slot, i, k);
            const double dxi = q == U ? dxi_u[l] : 0.0;
            dS(q, l, i, k) = dg * xi[l] + j.g(i, k) * dxi - (l == i ? dth(q, k) : 0.0);
          }
        }
    const ResidualList r = canonical_residuals(geo, S, dS);
    if (rep.residuals.empty()) rep.residuals = r;
    for (size_t q = 0; q < r.size(); ++q) rep.residuals[q].second = std::max(rep.residuals[q].second, r[q].second);
    rep.xi_norm = std::max(rep.xi_norm, std::abs(xi.dot(j.g * xi)));
  }
  return rep;
}

}  // namespace pwlab
