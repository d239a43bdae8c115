#include <random>

#include "doctest.h"
#include "pwlab/quaternionic.hpp"

using namespace pwlab;

namespace {

RVec null_xi(int D, int p) {
  // e_1 + f_1
  RVec xi(static_cast<size_t>(D));
  xi[0] = 1;
  xi[size_t(4 * p)] = 1;
  return xi;
}

Vec to_vec(const RVec& v) {
  Vec out(int(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[Eigen::Index(i)] = v[i].get_d();
  return out;
}

// Random rational null vector: positive and negative parts of equal norm.
RVec random_null(std::mt19937_64& rng, int p, int q) {
  std::uniform_int_distribution<int> d(-3, 3);
  const int D = 4 * (p + q);
  RVec xi(static_cast<size_t>(D));
  // Pythagorean-style: x on the positive block, then a vector of the same norm on the negative block.
  Rational pos = 0;
  for (int i = 0; i < 4 * p; ++i) {
    xi[size_t(i)] = d(rng);
    pos += xi[size_t(i)] * xi[size_t(i)];
  }
  if (pos == 0) {
    xi[0] = 1;
    pos = 1;
  }
  // Negative block: (x_0, ..., x_3) permuted and sign-flipped has the same norm when q >= 1.
  for (int i = 0; i < 4 * p && i < 4 * q; ++i) xi[size_t(4 * p + i)] = (i % 2 ? -1 : 1) * xi[size_t((i + 1) % (4 * p))];
  Rational neg = 0;
  for (int i = 4 * p; i < D; ++i) neg += xi[size_t(i)] * xi[size_t(i)];
  if (neg != pos) {
    for (int i = 4 * p; i < D; ++i) xi[size_t(i)] = 0;
    xi[size_t(4 * p)] = 1;
    for (int i = 0; i < 4 * p; ++i) xi[size_t(i)] = 0;
    xi[0] = 1;
  }
  return xi;
}

}  // namespace

TEST_CASE("flat quaternionic model") {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 0}, std::pair{2, 1}, std::pair{0, 3}}) {
    const QuaternionTriple t = build_flat_model(p, q);
    const TripleChecks c = triple_checks(t, rational_rotation(1, Rational(1, 2), -2));
    CHECK(c.squares);
    CHECK(c.product);
    CHECK(c.triple_product);
    CHECK(c.skew);
    CHECK(c.omega_antisymmetric);
    CHECK(c.four_form_invariant);
    CHECK(c.all());
    CHECK_FALSE(fundamental_four_form(t).empty());
  }
  CHECK_THROWS_AS(build_flat_model(1, 0), std::invalid_argument);

  const RationalMatrix r = rational_rotation(Rational(1, 3), 2, Rational(-5, 7));
  RationalMatrix rt(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rt(i, j) = r(j, i);
  const RationalMatrix rrt = multiply(r, rt);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(rrt(i, j) == (i == j ? 1 : 0));

  // A rotated triple is still quaternionic.
  const QuaternionTriple rot = rotate(build_flat_model(1, 1), r);
  CHECK(triple_checks(rot, rational_rotation(2, 0, 1)).all());

  // Omega genuinely changes if only J1 is flipped (not a rotation).
  QuaternionTriple flipped = build_flat_model(1, 1);
  for (int i = 0; i < flipped.dim(); ++i)
    for (int j = 0; j < flipped.dim(); ++j) flipped.J[0](i, j) = -flipped.J[0](i, j);
  CHECK_FALSE(triple_checks(flipped, rational_rotation(0, 0, 0)).product);
}

TEST_CASE("linear-type structure tensor") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 1}}) {
    const QuaternionTriple t = build_flat_model(p, q);
    const int D = t.dim();
    const Vec xi = to_vec(null_xi(D, p));
    const TensorValue S = qk_structure_S(t, xi);
    CHECK(qk_metric_skew_defect(t, S) <= 1e-12);
    // S_xi xi = 0
    double sxx = 0.0;
    for (int l = 0; l < D; ++l) {
      double acc = 0.0;
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) acc += S(l, i, j) * xi[i] * xi[j];
      sxx = std::max(sxx, std::abs(acc));
    }
    CHECK(sxx <= 1e-14);
    for (int k = 0; k < 100; ++k) {
      Vec x(D), y(D);
      for (int i = 0; i < D; ++i) {
        x[i] = nd(rng);
        y[i] = nd(rng);
      }
      Vec sx = Vec::Zero(D);
      for (int l = 0; l < D; ++l)
        for (int i = 0; i < D; ++i)
          for (int j = 0; j < D; ++j) sx[l] += S(l, i, j) * x[i] * xi[j];
      CHECK((sx - qk_nabla_xi(t, xi, x)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(qk_xi_curvature(t, xi, x, y).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  const QuaternionTriple t = build_flat_model(1, 1);
  Vec spacelike = Vec::Zero(8);
  spacelike[0] = 1.0;
  CHECK_THROWS_AS(qk_structure_S(t, spacelike), NonIsotropicXi);
  CHECK_THROWS_AS(qk_structure_S(t, Vec::Zero(8)), NonIsotropicXi);
}

TEST_CASE("wedge kernel dimensions") {
  const QuaternionTriple t8 = build_flat_model(1, 1);
  const RVec th8 = lower_vector(t8, null_xi(8, 1));
  CHECK(wedge_kernel_dimension(wedge_system(t8, th8, 3)) == 0);
  CHECK(wedge_kernel_dimension(wedge_system(t8, th8, 0)) == 7);
  CHECK(wedge_kernel_dimension(wedge_system(t8, th8, 1)) == 1);
  CHECK(wedge_kernel_dimension(wedge_system(t8, RVec(8), 3)) == 28);
  CHECK(constraint_rank(wedge_system(t8, th8, 3)) == 4);

  const QuaternionTriple t12 = build_flat_model(2, 1);
  const RVec th12 = lower_vector(t12, null_xi(12, 2));
  CHECK(wedge_kernel_dimension(wedge_system(t12, th12, 3)) == 0);
  CHECK(wedge_kernel_dimension(wedge_system(t12, th12, 0)) == 11);

  // Invariance under rotation of the triple and rescaling theta.
  const QuaternionTriple r8 = rotate(t8, rational_rotation(Rational(2, 3), -1, 4));
  CHECK(wedge_kernel_dimension(wedge_system(r8, th8, 3)) == 0);
  CHECK(wedge_kernel_dimension(wedge_system(r8, th8, 1)) == 1);
  RVec scaled = th8;
  for (auto& v : scaled) v *= Rational(-7, 3);
  CHECK(wedge_kernel_dimension(wedge_system(t8, scaled, 3)) == 0);

  // Four constraint covectors are independent for any nonzero theta.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int k = 0; k < 20; ++k) {
    RVec th(8);
    for (auto& v : th) v = d(rng);
    th[size_t(k % 8)] += 5;
    CHECK(constraint_rank(wedge_system(t8, th, 3)) == 4);
  }
}

TEST_CASE("flatness report") {
  const FlatnessReport a = flatness_report(1, 1, null_xi(8, 1));
  CHECK(a.metric_nondegenerate);
  CHECK(a.xi_isotropic);
  CHECK(a.nu_forced_zero);
  CHECK(a.constraint_rank == 4);
  CHECK(a.kernel_full == 0);
  CHECK(a.kernel_theta_only == 7);
  CHECK(a.kernel_two_constraints > 0);
  CHECK(a.forces_flat);
  CHECK(a.hyperkahler_forces_flat);
  CHECK_FALSE(a.control_forces_flat);

  std::mt19937_64 rng(77);
  for (int k = 0; k < 3; ++k) {
    const RVec xi = random_null(rng, 2, 1);
    const FlatnessReport b = flatness_report(2, 1, xi);
    CHECK(b.xi_isotropic);
    CHECK(b.forces_flat);
    CHECK_FALSE(b.control_forces_flat);
  }

  RVec spacelike(8);
  spacelike[0] = 1;
  const FlatnessReport c = flatness_report(1, 1, spacelike);
  CHECK_FALSE(c.xi_isotropic);
  CHECK_FALSE(c.forces_flat);
}
