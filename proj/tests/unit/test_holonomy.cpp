#include <cmath>
#include <random>

#include "doctest.h"
#include "pwlab/holonomy.hpp"
#include "test_support.hpp"

using namespace pwlab;
using testing_support::base_point;
using testing_support::random_point;
using testing_support::random_spec;

namespace {
const std::complex<double> I(0.0, 1.0);

double dist(const CMat2& a, const CMat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMat2 paper_form(int s) {
  CMat2 m;
  m << I, I, -I, -I;
  return double(s) * m;
}
}  // namespace

TEST_CASE("curvature endomorphisms span the generator line") {
  const CurvatureEndomorphisms c = curvature_endomorphisms(singular_spec(4.0), base_point(4, 1, 0));
  CHECK(c.span.dim() == 1);
  CHECK(c.coefficient == doctest::Approx(2.0));
  CHECK(c.proportionality_defect <= 1e-12);
  CHECK(c.span.distance(holonomy_generator(0)) <= 1e-12);

  CHECK(curvature_endomorphisms(flat_spec(1), base_point(6, 0.2, 0.3)).span.dim() == 0);
  for (int n : {0, 2}) CHECK(holonomy_generator(n).squaredNorm() == 2.0);
  CHECK((holonomy_generator(2) * holonomy_generator(2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("infinitesimal holonomy stabilizes at dimension one") {
  {
    const HolonomyResult h = infinitesimal_holonomy(singular_spec(4.0), base_point(4, 1, 0), 1);
    CHECK(h.span.dim() == 1);
    CHECK(h.stabilized);
  }
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    const ProfileKind k = t % 2 ? ProfileKind::SingularScaleInvariant : ProfileKind::CahenWallachAnalog;
    const MetricSpec s = random_spec(rng, t % 3, k, t % 4 == 0, 2);
    const HolonomyResult h = infinitesimal_holonomy(s, random_point(rng, s.dim()), 2);
    CHECK(h.span.dim() == 1);
    CHECK(h.stabilized);
    CHECK(h.span.distance(holonomy_generator(s.n)) <= 1e-9 * holonomy_generator(s.n).norm());
  }
  MetricSpec neg = singular_spec(-2.0, 1);
  neg.couplings[0].holomorphic = {{0.5, 0}, {0, 1}};
  CHECK(infinitesimal_holonomy(neg, random_point(rng, 6), 1).span.dim() == 1);
  const HolonomyResult f = infinitesimal_holonomy(flat_spec(), base_point(4, 1, 1), 1);
  CHECK(f.span.dim() == 0);
  CHECK(f.stabilized);
}

TEST_CASE("invariant subspaces") {
  MetricSpec s = singular_spec(4.0, 1);
  s.couplings[0].holomorphic = {{0, 0}, {1, 0}};
  const InvariantSubspaceReport r = invariant_subspaces(s, base_point(6, 1, 0));
  CHECK(r.complement_dim == 2);
  CHECK(r.e_invariance == 0.0);
  CHECK(r.image_in_null == 0.0);
  CHECK(r.kills_complement <= 1e-14);
  const Mat g = metric_components(s, base_point(6, 1, 0)).as_matrix();
  CHECK((g.topRows(4) * r.complement).cwiseAbs().maxCoeff() <= 1e-14);

  const InvariantSubspaceReport r0 = invariant_subspaces(singular_spec(4.0), base_point(4, 1, 0));
  CHECK(r0.complement_dim == 0);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const MetricSpec rs = random_spec(rng, 1 + t % 3, ProfileKind::SingularScaleInvariant, false, 2);
    const InvariantSubspaceReport rr = invariant_subspaces(rs, random_point(rng, rs.dim()));
    CHECK(rr.complement_dim == 2 * rs.n);
    CHECK(rr.kills_complement <= 1e-12);
  }
}

TEST_CASE("su(1,1) normal form") {
  {
    const NormalForm nf = su11_normal_form(singular_spec(4.0), base_point(4, 1, 0));
    CHECK(nf.sign == 1);
    CHECK(dist(nf.matrix, paper_form(1)) <= 1e-12);
    CHECK(nf.square <= 1e-12);
    CHECK(nf.trace <= 1e-12);
    CHECK(nf.su11_defect <= 1e-12);
    CHECK(nf.fit_residual <= 1e-12);
    CMat2 h = CMat2::Zero();
    h(0, 0) = 2.0;
    h(1, 1) = -2.0;
    CHECK(dist(nf.hermitian_form, h) <= 1e-12);
  }
  {
    const NormalForm nf = su11_normal_form(singular_spec(-4.0), base_point(4, 1, 0));
    CHECK(nf.sign == -1);
    CHECK(dist(nf.matrix, paper_form(-1)) <= 1e-12);
    CHECK(nf.su11_defect <= 1e-12);
  }
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const MetricSpec s = random_spec(rng, t % 3, ProfileKind::SingularScaleInvariant, t % 2 == 0, 2);
    const NormalForm nf = su11_normal_form(s, random_point(rng, s.dim()));
    CHECK(dist(nf.rescaled, paper_form(nf.sign)) <= 1e-10);
    CHECK(nf.square <= 1e-10);
    CHECK(nf.su11_defect <= 1e-10);
  }
  MetricSpec zero = flat_spec();
  CHECK_THROWS_AS(su11_normal_form(zero, base_point(4, 1, 0)), DegenerateBasis);
}

TEST_CASE("generator is skew, complex-linear and nilpotent") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const MetricSpec s = random_spec(rng, t % 4, ProfileKind::SingularScaleInvariant, false, 2);
    const GeneratorChecks c = generator_checks(s, random_point(rng, s.dim()));
    CHECK(c.skew <= 1e-12);
    CHECK(c.commutes_J == 0.0);
    CHECK(c.nilpotent == 0.0);
  }
}
