#include "pwlab/metric_family.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pwlab {

void MetricSpec::validate() const {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  if (int(epsilons.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " epsilons, got " +
                                std::to_string(epsilons.size()));
  for (int e : epsilons)
    if (e != 1 && e != -1) throw std::invalid_argument("epsilons must be +1 or -1");
  if (int(couplings.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " couplings, got " +
                                std::to_string(couplings.size()));
  if (!std::isfinite(profile.b0)) throw std::invalid_argument("b0 must be finite");
  switch (profile.kind) {
    case ProfileKind::SingularScaleInvariant:
    case ProfileKind::CahenWallachAnalog:
      if (profile.b0 == 0.0) throw std::invalid_argument("this profile kind needs b0 != 0");
      break;
    case ProfileKind::Flat:
      if (profile.b0 != 0.0) throw std::invalid_argument("flat profile needs b0 = 0");
      break;
  }
}

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names = {"w1", "w2", "z1", "z2"};
  for (int a = 1; a <= n; ++a) {
    names.push_back("x" + std::to_string(a));
    names.push_back("y" + std::to_string(a));
  }
  return names;
}

namespace {

void check_point(const MetricSpec& spec, const Point& p) {
  if (p.size() != spec.dim())
    throw std::invalid_argument("point has " + std::to_string(p.size()) +
                                " coordinates, expected " + std::to_string(spec.dim()));
}

Jet2 rho_squared(const Point& p) {
  const Jet2 x = Jet2::variable(p[0], 0);
  const Jet2 y = Jet2::variable(p[1], 1);
  return x * x + y * y;
}

}  // namespace

Jet2 eval_profile_b(const MetricSpec& spec, const Point& p) {
  check_point(spec, p);
  Jet2 b;
  const double b0 = spec.profile.b0;
  switch (spec.profile.kind) {
    case ProfileKind::SingularScaleInvariant: {
      const Jet2 r2 = rho_squared(p);
      if (r2.value() == 0.0) throw DomainError("point lies on the singular set w1 = w2 = 0");
      b = (0.25 * b0) * reciprocal(r2);
      break;
    }
    case ProfileKind::CahenWallachAnalog:
      b = (0.25 * b0) * rho_squared(p);
      break;
    case ProfileKind::Flat:
      break;
  }
  if (!spec.profile.harmonic.empty()) b += complex_poly_eval(spec.profile.harmonic, p[0], p[1]).first;
  return b;
}

std::vector<CouplingJets> eval_couplings(const MetricSpec& spec, const Point& p) {
  check_point(spec, p);
  std::vector<CouplingJets> out;
  out.reserve(size_t(spec.n));
  for (const Coupling& c : spec.couplings) {
    if (c.raw) {
      out.push_back({real_poly_eval(c.r_terms, p[0], p[1]), real_poly_eval(c.s_terms, p[0], p[1])});
    } else {
      auto [r, s] = complex_poly_eval(c.holomorphic, p[0], p[1]);
      out.push_back({r, s});
    }
  }
  return out;
}

Jet2 metric_b(const MetricSpec& spec, const Point& p) {
  Jet2 b = eval_profile_b(spec, p);
  if (spec.profile.coupling_compensation) {
    const auto cs = eval_couplings(spec, p);
    for (int a = 0; a < spec.n; ++a)
      b += double(spec.epsilons[size_t(a)]) * (cs[size_t(a)].r * cs[size_t(a)].r +
                                               cs[size_t(a)].s * cs[size_t(a)].s);
  }
  return b;
}

double profile_laplacian_target(const MetricSpec& spec, const Point& p) {
  const double b0 = spec.profile.b0;
  switch (spec.profile.kind) {
    case ProfileKind::SingularScaleInvariant: {
      const double r2 = p[0] * p[0] + p[1] * p[1];
      return b0 / (r2 * r2);
    }
    case ProfileKind::CahenWallachAnalog:
      return b0;
    case ProfileKind::Flat:
      return 0.0;
  }
  return 0.0;
}

namespace {

// Symmetric matrix of metric jets.
struct JetMatrix {
  int dim;
  std::vector<Jet2> e;
  explicit JetMatrix(int d) : dim(d), e(size_t(d) * d) {}
  void set(int i, int j, const Jet2& v) {
    e[size_t(i) * dim + j] = v;
    e[size_t(j) * dim + i] = v;
  }
  const Jet2& operator()(int i, int j) const { return e[size_t(i) * dim + j]; }
};

JetMatrix metric_jets(const MetricSpec& spec, const Point& p) {
  const int D = spec.dim();
  JetMatrix m(D);
  const Jet2 b = metric_b(spec, p);
  const auto cs = eval_couplings(spec, p);
  m.set(coord::w1, coord::z1, Jet2(1.0));
  m.set(coord::w2, coord::z2, Jet2(1.0));
  m.set(coord::w1, coord::w1, b);
  m.set(coord::w2, coord::w2, b);
  for (int a = 0; a < spec.n; ++a) {
    const auto& c = cs[size_t(a)];
    m.set(coord::x(a), coord::w1, c.r);
    m.set(coord::y(a), coord::w2, c.r);
    m.set(coord::x(a), coord::w2, c.s);
    m.set(coord::y(a), coord::w1, -c.s);
    const double e = spec.epsilons[size_t(a)];
    m.set(coord::x(a), coord::x(a), Jet2(e));
    m.set(coord::y(a), coord::y(a), Jet2(e));
  }
  return m;
}

Mat closed_form_inverse(const MetricSpec& spec, double b, const std::vector<CouplingJets>& cs) {
  const int D = spec.dim();
  Mat gi = Mat::Zero(D, D);
  double B = -b;
  for (int a = 0; a < spec.n; ++a) {
    const double r = cs[size_t(a)].r.value(), s = cs[size_t(a)].s.value();
    B += spec.epsilons[size_t(a)] * (r * r + s * s);
  }
  gi(coord::w1, coord::z1) = gi(coord::z1, coord::w1) = 1.0;
  gi(coord::w2, coord::z2) = gi(coord::z2, coord::w2) = 1.0;
  gi(coord::z1, coord::z1) = gi(coord::z2, coord::z2) = B;
  for (int a = 0; a < spec.n; ++a) {
    const double e = spec.epsilons[size_t(a)];
    const double r = cs[size_t(a)].r.value(), s = cs[size_t(a)].s.value();
    const int x = coord::x(a), y = coord::y(a);
    gi(coord::z1, x) = gi(x, coord::z1) = -e * r;
    gi(coord::z1, y) = gi(y, coord::z1) = e * s;
    gi(coord::z2, x) = gi(x, coord::z2) = -e * s;
    gi(coord::z2, y) = gi(y, coord::z2) = -e * r;
    gi(x, x) = gi(y, y) = e;
  }
  return gi;
}

}  // namespace

TensorValue metric_components(const MetricSpec& spec, const Point& p) {
  const JetMatrix m = metric_jets(spec, p);
  TensorValue t = TensorValue::covariant(spec.dim(), 2);
  for (int i = 0; i < spec.dim(); ++i)
    for (int j = 0; j < spec.dim(); ++j) t(i, j) = m(i, j).value();
  return t;
}

TensorValue inverse_metric(const MetricSpec& spec, const Point& p) {
  const Mat gi = closed_form_inverse(spec, metric_b(spec, p).value(), eval_couplings(spec, p));
  return TensorValue::from_matrix(gi, Variance::Upper, Variance::Upper);
}

double cauchy_riemann_defect(const MetricSpec& spec, const Point& p) {
  double worst = 0.0;
  for (const auto& c : eval_couplings(spec, p)) {
    const Jet2 e1 = c.s.derivative(0) - c.r.derivative(1);
    const Jet2 e2 = c.s.derivative(1) + c.r.derivative(0);
    for (int k = 0; k < 6; ++k) {
      worst = std::max(worst, std::abs(e1.raw()[size_t(k)]));
      worst = std::max(worst, std::abs(e2.raw()[size_t(k)]));
    }
  }
  return worst;
}

ComplexWaveMetric::ComplexWaveMetric(MetricSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

MetricJet ComplexWaveMetric::jet(const Point& p, int order) const {
  const int D = spec_.dim();
  const JetMatrix m = metric_jets(spec_, p);
  MetricJet j;
  j.allocate(D, order, {coord::w1, coord::w2});
  auto e = [](int a) { return std::pair<int, int>{a == 0, a == 1}; };
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) {
      const Jet2& v = m(r, c);
      j.g(r, c) = v.value();
      if (order >= 1)
        for (int a = 0; a < 2; ++a) j.dg(a, r, c) = v.d(e(a).first, e(a).second);
      if (order >= 2)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            j.ddg(a, b, r, c) = v.d(e(a).first + e(b).first, e(a).second + e(b).second);
      if (order >= 3)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int cc = 0; cc < 2; ++cc)
              j.dddg(a, b, cc, r, c) = v.d(e(a).first + e(b).first + e(cc).first,
                                           e(a).second + e(b).second + e(cc).second);
    }
  j.ginv = closed_form_inverse(spec_, j.g(coord::w1, coord::w1), eval_couplings(spec_, p));
  return j;
}

double ComplexWaveMetric::singular_distance(const Point& p) const {
  if (spec_.profile.kind != ProfileKind::SingularScaleInvariant)
    return std::numeric_limits<double>::infinity();
  return std::hypot(p[0], p[1]);
}

double ComplexWaveMetric::singular_approach_rate(const Point&, const Vec& v) const {
  return std::hypot(v[coord::w1], v[coord::w2]);
}

std::vector<std::string> ComplexWaveMetric::coordinate_names() const {
  return pwlab::coordinate_names(spec_.n);
}

namespace {
MetricSpec base_spec(ProfileKind kind, double b0, int n) {
  MetricSpec s;
  s.n = n;
  s.epsilons.assign(size_t(n), 1);
  s.couplings.assign(size_t(n), Coupling{});
  s.profile.kind = kind;
  s.profile.b0 = b0;
  return s;
}
}  // namespace

MetricSpec singular_spec(double b0, int n) {
  return base_spec(ProfileKind::SingularScaleInvariant, b0, n);
}
MetricSpec cahen_wallach_spec(double b0, int n) {
  return base_spec(ProfileKind::CahenWallachAnalog, b0, n);
}
MetricSpec flat_spec(int n) { return base_spec(ProfileKind::Flat, 0.0, n); }

}  // namespace pwlab
