#include <cmath>
#include <random>

#include "doctest.h"
#include "pwlab/holonomy.hpp"
#include "pwlab/kahler.hpp"
#include "pwlab/lie_model.hpp"
#include "test_support.hpp"

using namespace pwlab;
namespace L = lie_basis;
using testing_support::base_point;

namespace {

RVec combo(const LieAlgebra& g, std::initializer_list<std::pair<int, Rational>> terms) {
  RVec v(static_cast<size_t>(g.dim()));
  for (const auto& [k, c] : terms) v[size_t(k)] += c;
  return v;
}

// Compensated coupling vanishing at w = 1, so h(p) = 0 at the reference point.
MetricSpec vanishing_coupling_spec(double b0, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MetricSpec s = singular_spec(b0, n);
  s.profile.coupling_compensation = true;
  s.epsilons.clear();
  for (int a = 0; a < n; ++a) {
    s.epsilons.push_back(u(rng) < 0 ? -1 : 1);
    const std::complex<double> k(u(rng), u(rng));
    s.couplings[size_t(a)].holomorphic = {-k, k};
  }
  return s;
}

double max_mismatch(const GeometricBrackets& gb, const LieAlgebra& alg) {
  double worst = 0.0;
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = 0; j < alg.dim(); ++j)
      for (int k = 0; k < alg.dim(); ++k)
        worst = std::max(worst, std::abs(gb.at(i, j, k) - alg.c(i, j, k).get_d()));
  return worst;
}

}  // namespace

TEST_CASE("bracket table examples") {
  const LieAlgebra g = build_algebra(1, 1, 4);
  CHECK(g.dim() == 7);
  CHECK(g.bracket(L::z1, L::w1) == g.unit(L::z1));
  CHECK(g.bracket(L::x(0), L::y(0)) == combo(g, {{L::z2, -2}, {L::A, 2}}));
  CHECK(g.bracket(L::w1, L::w2) == combo(g, {{L::z2, -2}}));
  CHECK(g.bracket(L::z1, L::z2) == combo(g, {}));
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      for (int k = 0; k < g.dim(); ++k) CHECK(g.c(i, j, k) == -g.c(j, i, k));
  CHECK(g.labels().back() == "y1");
}

TEST_CASE("Jacobi identity is exact") {
  CHECK(jacobi_residual(build_algebra(0, 1, 4)) == 0);
  CHECK(jacobi_residual(build_algebra(2, Rational(-3, 2), 1)) == 0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int t = 0; t < 12; ++t) {
    const Rational bp(num(rng), den(rng)), b0(num(rng), den(rng));
    CHECK(jacobi_residual(build_algebra(t % 4, bp, b0)) == 0);
  }
  CHECK(jacobi_residual(build_algebra(2, 1, 4, {1, -1})) == 0);
  for (int k : {L::A, L::z2}) {
    LieAlgebra bad = build_algebra(1, 1, 4);
    flip_bracket(bad, L::z1, L::w2, k);
    CHECK(jacobi_residual(bad) > 0);
  }
  CHECK_THROWS_AS(build_algebra(1, 1, 4, {2}), std::invalid_argument);
}

TEST_CASE("solvable, not nilpotent, two-step nilradical") {
  for (int n : {1, 2}) {
    const StructureDiagnostics d = structure_diagnostics(build_algebra(n, Rational(-3, 2), 1, std::vector<int>(size_t(n), -1)));
    CHECK(d.solvable);
    CHECK(d.derived_length >= 1);
    CHECK(d.derived_length <= 3);
    CHECK_FALSE(d.nilpotent);
    CHECK(d.lower_central_series.back() > 0);
    CHECK(d.nilradical_is_ideal);
    CHECK(d.nilradical_contains_derived);
    CHECK(d.nilradical_two_step);
    CHECK(d.nilradical_class == 2);
    CHECK(d.nilradical_maximal);
    CHECK(d.maximal_margin > 0.0);
    CHECK(d.heisenberg);
  }
  const StructureDiagnostics d1 = structure_diagnostics(build_algebra(1, 1, 4));
  CHECK(d1.derived_length <= 3);
  CHECK(d1.heisenberg);
  CHECK(d1.nilradical_two_step);
  // n = 0: the nilradical span{A, z1, z2} is abelian.
  const StructureDiagnostics d0 = structure_diagnostics(build_algebra(0, 1, 4));
  CHECK(d0.solvable);
  CHECK_FALSE(d0.nilpotent);
  CHECK(d0.nilradical_is_ideal);
  CHECK(d0.nilradical_two_step);
  CHECK(d0.nilradical_class == 1);
  CHECK(d0.nilradical_maximal);
}

TEST_CASE("geometric brackets reproduce the table") {
  for (double b0 : {4.0, -3.0, 0.5}) {
    const MetricSpec s = singular_spec(b0);
    const Point p = base_point(4, 1, 0);
    const GeometricBrackets gb = geometric_brackets(s, p);
    CHECK(gb.proportionality_defect <= 1e-12);
    const double bp = metric_b(s, p).value();
    CHECK(max_mismatch(gb, build_algebra(0, to_rational(bp), to_rational(b0))) <= 1e-10);
  }
  std::mt19937_64 rng(21);
  for (int t = 0; t < 8; ++t) {
    const int n = 1 + t % 2;
    const double b0 = t % 3 == 0 ? -2.5 : 1.5 + t;
    const MetricSpec s = vanishing_coupling_spec(b0, n, rng);
    Point p = testing_support::random_point(rng, s.dim());
    p[coord::w1] = 1.0;
    p[coord::w2] = 0.0;
    const GeometricBrackets gb = geometric_brackets(s, p);
    CHECK(gb.proportionality_defect <= 1e-10);
    const double bp = metric_b(s, p).value();
    CHECK(max_mismatch(gb, build_algebra(n, to_rational(bp), to_rational(b0), s.epsilons)) <= 1e-10);
  }
  CHECK_THROWS_AS(geometric_brackets(singular_spec(4.0), base_point(4, 2, 0)), std::invalid_argument);
}

TEST_CASE("canonical curvature") {
  const Point p = base_point(6, 1, 0);
  for (int eps : {1, -1}) {
    MetricSpec s = singular_spec(4.0, 1);
    s.epsilons = {eps};
    const CanonicalCurvature cc = canonical_curvature(s, p);
    CHECK(cc.formula_defect <= 1e-10);
    CHECK(cc.generator_defect <= 1e-10);
    CHECK(cc.tilde_defect <= 1e-10);
    const double b = metric_b(s, p).value();
    // A d_w1 = d_z2
    CHECK(cc.rs(coord::z2, coord::w1, coord::w1, coord::w2) == doctest::Approx(2.0 * b));
    // omega(d_x, d_y) = g(d_x, J d_y) = -eps
    const Mat omega = metric_components(s, p).as_matrix() * standard_J(1);
    CHECK(omega(coord::x(0), coord::y(0)) == doctest::Approx(-eps));
    CHECK(cc.tilde(coord::z2, coord::w1, coord::x(0), coord::y(0)) == doctest::Approx(-2.0 * eps));
  }
  std::mt19937_64 rng(8);
  for (int t = 0; t < 6; ++t) {
    const MetricSpec s = vanishing_coupling_spec(t % 2 ? 3.0 : -1.0, 1 + t % 3, rng);
    Point p = testing_support::random_point(rng, s.dim());
    p[coord::w1] = 1.0;
    p[coord::w2] = 0.0;
    const CanonicalCurvature cc = canonical_curvature(s, p);
    CHECK(cc.formula_defect <= 1e-10);
    CHECK(cc.tilde_defect <= 1e-10);
  }
  const CanonicalCurvature f = canonical_curvature(flat_spec(1), p);
  CHECK(f.rs.max_abs() > 0.0);
  double sum = 0.0;
  for (size_t q = 0; q < f.rs.size(); ++q) sum = std::max(sum, std::abs(f.rs.data()[q] + f.tilde.data()[q]));
  CHECK(sum <= 1e-14);
}

TEST_CASE("matrix table diagnostic") {
  const LieAlgebra g = build_algebra(1, 1, 4);
  const RepCheck rc = matrix_rep_check(g);
  CHECK(rc.linearity_defect <= 1e-14);
  CHECK(rc.isotropy_matches);
  CHECK(rc.affine_defect == doctest::Approx(4.0));
  CHECK(rc.matched + rc.mismatched == g.dim() * (g.dim() - 1) / 2);
  bool z_pair = false;
  for (const RepPair& pr : rc.pairs)
    if (pr.i == L::z1 && pr.j == L::z2) {
      z_pair = true;
      CHECK(pr.mismatch <= 1e-14);
    }
  CHECK(z_pair);
  CHECK(table_matrix(1, 1, 4, Eigen::VectorXd::Zero(7)).rows() == 7);
  CHECK_THROWS_AS(table_matrix(1, 1, 4, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("K-submanifold geodesics") {
  {
    const KGeodesicResult f = k_geodesic(1.0, 1.0, 0.0, 0.0, 5.0);
    CHECK(f.status == IntegrationStatus::Completed);
    CHECK(f.c == doctest::Approx(-1.0));
    CHECK_FALSE(f.pole_ahead);
    CHECK(f.max_rel_error_x <= 1e-6);
    CHECK(f.rows.back().x == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    const KGeodesicResult b = k_geodesic(1.0, 1.0, 0.0, 0.0, -2.0);
    CHECK(b.status == IntegrationStatus::BlowUp);
    CHECK(b.pole_ahead);
    CHECK(b.t_stop == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(b.max_rel_error_x <= 1e-6);
    CHECK(b.max_rel_error_y <= 1e-6);
  }
  {
    const KGeodesicResult r = k_geodesic(1.0, -1.0, 0.0, 0.0, 2.0);
    CHECK(r.status == IntegrationStatus::BlowUp);
    CHECK(r.c == doctest::Approx(1.0));
    CHECK(r.t_stop == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.max_rel_error_x <= 1e-6);
  }
  {
    const KGeodesicResult r = k_geodesic(2.0, 0.7, -0.7, 0.0, 3.0);
    CHECK(r.status == IntegrationStatus::Completed);
    CHECK_FALSE(r.has_pole);
    for (const auto& row : r.rows) {
      CHECK(std::abs(row.x) <= 1e-15);
      CHECK(row.y == doctest::Approx(1.4).epsilon(1e-12));
    }
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double bp = (t % 2 ? 1.0 : -1.0) * (0.3 + std::abs(u(rng)));
    const KGeodesicResult r = k_geodesic(bp, u(rng), u(rng), u(rng), u(rng) * 3.0);
    CHECK(r.max_rel_error_x <= 1e-6);
    CHECK(r.max_rel_error_y <= 1e-6);
    if (r.pole_ahead) CHECK(r.status == IntegrationStatus::BlowUp);
    else CHECK(r.status == IntegrationStatus::Completed);
  }
  CHECK_THROWS_AS(k_geodesic(0.0, 1.0, 0.0, 0.0, 1.0), std::invalid_argument);
}
