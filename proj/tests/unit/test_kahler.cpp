#include <cmath>
#include <random>

#include "doctest.h"
#include "pwlab/kahler.hpp"
#include "test_support.hpp"

using namespace pwlab;
using testing_support::base_point;
using testing_support::random_point;
using testing_support::random_spec;

namespace {

double residual(const ResidualList& r, const std::string& name) {
  for (const auto& [k, v] : r)
    if (k == name) return v;
  FAIL("missing residual " << name);
  return 0.0;
}

MetricSpec two_coupling_spec(bool compensated) {
  MetricSpec s = singular_spec(-2.0, 2);
  s.couplings[0].holomorphic = {{0, 0}, {1, 0}};
  s.couplings[1].holomorphic = {{0, 0}, {0, 0}, {1, 0}};
  s.profile.coupling_compensation = compensated;
  return s;
}

}  // namespace

TEST_CASE("standard complex structure") {
  for (int n : {0, 1, 3}) {
    const Mat J = standard_J(n);
    CHECK((J * J + Mat::Identity(2 * n + 4, 2 * n + 4)).cwiseAbs().maxCoeff() == 0.0);
  }
  const Mat J = standard_J(1);
  CHECK(J(coord::w2, coord::w1) == 1.0);
  CHECK(J(coord::w1, coord::w2) == -1.0);
  CHECK(J(coord::z2, coord::z1) == 1.0);
  CHECK(J(coord::y(0), coord::x(0)) == 1.0);

  std::mt19937_64 rng(3);
  MetricSpec s = singular_spec(4.0, 1);
  s.couplings[0].holomorphic = {{0, 0}, {1, 0}};
  for (int t = 0; t < 50; ++t) {
    const Point p = random_point(rng, 6);
    const Mat g = metric_components(s, p).as_matrix();
    const Vec jx = J.col(coord::x(0)), jw = J.col(coord::w1);
    CHECK(jx.dot(g * jw) == doctest::Approx(p[0]));
    const ResidualList r = complex_structure_residuals(s, p);
    CHECK(residual(r, "hermitian") <= 1e-12);
    CHECK(residual(r, "parallel") <= 1e-10);
  }
}

TEST_CASE("xi and theta examples") {
  const MetricSpec s = singular_spec(4.0);
  {
    const XiTheta xt = xi_and_theta(s, base_point(4, 1, 0));
    Vec xi = Vec::Zero(4), th = Vec::Zero(4);
    xi[coord::z1] = -1.0;
    th[coord::w1] = -1.0;
    CHECK((xt.xi - xi).cwiseAbs().maxCoeff() == 0.0);
    CHECK((xt.theta - th).cwiseAbs().maxCoeff() == 0.0);
  }
  {
    const XiTheta xt = xi_and_theta(s, base_point(4, 0, 2));
    CHECK(xt.xi[coord::z2] == -0.5);
    CHECK(xt.theta[coord::w2] == -0.5);
    CHECK(xt.xi.cwiseAbs().sum() == 0.5);
  }
  CHECK_THROWS_AS(xi_and_theta(s, base_point(4, 0, 0)), DomainError);
}

TEST_CASE("structure tensor examples") {
  const HomogeneousStructure h(singular_spec(4.0), base_point(4, 1, 0));
  for (int l = 0; l < 4; ++l) CHECK(h.S(l, coord::z1, coord::z1) == 0.0);
  CHECK(h.S(coord::w1, coord::w1, coord::w1) == doctest::Approx(1.0));
  CHECK(h.S(coord::z1, coord::w1, coord::w1) == doctest::Approx(-1.0));
  CHECK(std::abs(h.S(coord::w2, coord::w1, coord::w1)) < 1e-15);
  CHECK(std::abs(h.S(coord::z2, coord::w1, coord::w1)) < 1e-15);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  const MetricSpec s = two_coupling_spec(false);
  const HomogeneousStructure hs(s, random_point(rng, s.dim()));
  const Mat& g = hs.geometry().g();
  for (int t = 0; t < 100; ++t) {
    Vec x(8), y(8), z(8);
    for (int i = 0; i < 8; ++i) {
      x[i] = nd(rng);
      y[i] = nd(rng);
      z[i] = nd(rng);
    }
    Vec sxy = Vec::Zero(8), sxz = Vec::Zero(8);
    for (int l = 0; l < 8; ++l)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          sxy[l] += hs.S(l, i, j) * x[i] * y[j];
          sxz[l] += hs.S(l, i, j) * x[i] * z[j];
        }
    CHECK(std::abs(sxy.dot(g * z) + y.dot(g * sxz)) <= 1e-10 * (1 + x.norm() * y.norm() * z.norm()));
  }
}

TEST_CASE("structure derivative agrees with finite differences") {
  std::mt19937_64 rng(19);
  const MetricSpec s = two_coupling_spec(true);
  const Point p = random_point(rng, s.dim(), 0.8, 2.0);
  const HomogeneousStructure h(s, p);
  const double step = 1e-5;
  for (int k : {coord::w1, coord::w2}) {
    Point pp = p, pm = p;
    pp[k] += step;
    pm[k] -= step;
    const HomogeneousStructure hp(s, pp), hm(s, pm);
    double worst = 0.0;
    for (int l = 0; l < s.dim(); ++l)
      for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j)
          worst = std::max(worst, std::abs(h.dS(k, l, i, j) - (hp.S(l, i, j) - hm.S(l, i, j)) / (2 * step)));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("canonical connection conditions, n = 0") {
  const HomogeneousStructure h(singular_spec(4.0), base_point(4, 1, 0));
  for (const auto& [name, v] : h.ambrose_singer_residuals()) {
    INFO(name);
    CHECK(v <= 1e-9);
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const MetricSpec s = random_spec(rng, 0, ProfileKind::SingularScaleInvariant, false);
    const HomogeneousStructure hs(s, random_point(rng, 4));
    CHECK(max_residual(hs.ambrose_singer_residuals()) <= 1e-9);
    CHECK(max_residual(hs.lemma_identities()) <= 1e-9);
    CHECK(max_residual(hs.linear_type_residuals()) <= 1e-10);
  }
}

TEST_CASE("compensated coupled metrics satisfy every identity") {
  std::mt19937_64 rng(23);
  const MetricSpec fixed = two_coupling_spec(true);
  for (int t = 0; t < 20; ++t) {
    const MetricSpec s = t < 5 ? fixed : random_spec(rng, 1 + t % 3, ProfileKind::SingularScaleInvariant, true, 3);
    const HomogeneousStructure h(s, random_point(rng, s.dim()));
    for (const auto& [name, v] : h.ambrose_singer_residuals()) {
      INFO(name);
      CHECK(v <= 1e-9);
    }
    for (const auto& [name, v] : h.lemma_identities()) {
      INFO(name);
      CHECK(v <= (name == "recurrence" ? 1e-9 : 1e-10));
    }
    CHECK(max_residual(h.linear_type_residuals()) <= 1e-10);
  }
}

TEST_CASE("without compensation, non-constant couplings break the curvature conditions only") {
  std::mt19937_64 rng(29);
  const MetricSpec s = two_coupling_spec(false);
  for (int t = 0; t < 10; ++t) {
    const HomogeneousStructure h(s, random_point(rng, s.dim()));
    const ResidualList as = h.ambrose_singer_residuals();
    for (const char* name : {"metric", "structure", "complex_structure", "xi", "theta"}) {
      INFO(name);
      CHECK(residual(as, name) <= 1e-9);
    }
    CHECK(residual(as, "curvature") > 1e-3);
    const ResidualList lem = h.lemma_identities();
    CHECK(residual(lem, "nabla_theta") <= 1e-10);
    CHECK(residual(lem, "theta_wedge_riemann") <= 1e-10);
    CHECK(residual(lem, "jtheta_wedge_riemann") <= 1e-10);
    CHECK(residual(lem, "closed_theta") <= 1e-10);
    CHECK(residual(lem, "recurrence") > 1e-3);
  }
}

TEST_CASE("lemma examples") {
  const HomogeneousStructure h(singular_spec(4.0), base_point(4, 1, 0));
  const Mat nth = h.geometry().covariant_derivative_covector(h.fields().theta, h.fields().dtheta);
  CHECK(nth(coord::w1, coord::w1) == doctest::Approx(1.0));
  const TensorValue& N = h.geometry().nabla_riemann();
  CHECK(N(coord::w1, coord::w1, coord::w2, coord::w1, coord::w2) ==
        doctest::Approx(4.0 * h.fields().theta[coord::w1] * h.geometry().riemann()(0, 1, 0, 1)));

  MetricSpec flat = flat_spec(1);
  const HomogeneousStructure hf(flat, base_point(6, 0.3, 0.4));
  const ResidualList r = hf.lemma_identities();
  CHECK(residual(r, "theta_wedge_riemann") == 0.0);
  CHECK(residual(r, "recurrence") == 0.0);
  CHECK(residual(r, "nabla_theta") <= 1e-12);
  CHECK(residual(hf.ambrose_singer_residuals(), "curvature") == 0.0);
}

TEST_CASE("Walker distribution") {
  std::mt19937_64 rng(31);
  for (int n = 0; n <= 2; ++n) {
    const MetricSpec s = random_spec(rng, n, ProfileKind::SingularScaleInvariant, n == 1, 2);
    std::vector<Point> pts;
    pts.push_back(base_point(s.dim(), 1, 0));
    for (int i = 0; i < 10; ++i) pts.push_back(random_point(rng, s.dim()));
    const WalkerReport w = walker_check(s, pts);
    CHECK(w.null_defect == 0.0);
    CHECK(w.parallel_defect <= 1e-11);
    CHECK(w.transport_defect <= 1e-11);
    CHECK(w.holds());
  }
}
