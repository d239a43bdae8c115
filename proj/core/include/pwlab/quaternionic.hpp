#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "pwlab/exact.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

class NonIsotropicXi : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flat model on R^{4n}, n = p + q: g = diag(+1 x 4p, -1 x 4q), J1, J2, J3 left
// multiplication by i, j, k on each quaternionic block.
struct QuaternionTriple {
  int p = 0;
  int q = 0;
  RationalMatrix g;
  std::array<RationalMatrix, 3> J;
  int dim() const { return 4 * (p + q); }
};

QuaternionTriple build_flat_model(int p, int q);

// Cayley map of the skew matrix of (a, b, c): an exact rational rotation.
RationalMatrix rational_rotation(const Rational& a, const Rational& b, const Rational& c);
// J'_a = sum_b R_ab J_b.
QuaternionTriple rotate(const QuaternionTriple& t, const RationalMatrix& r);

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
Mat to_double(const RationalMatrix& m);

// omega_a(X, Y) = g(X, J_a Y), as the matrix g J_a.
RationalMatrix kahler_form(const QuaternionTriple& t, int a);

// Components of a 4-form on sorted index quadruples (i < j < k < l), zeros omitted.
using FourForm = std::map<std::array<int, 4>, Rational>;
// Omega = sum_a omega_a ^ omega_a
FourForm fundamental_four_form(const QuaternionTriple& t);

struct TripleChecks {
  bool squares = false;        // J_a^2 = -Id
  bool product = false;        // J1 J2 = J3
  bool triple_product = false; // J1 J2 J3 = -Id
  bool skew = false;           // g(J_a X, Y) = -g(X, J_a Y)
  bool omega_antisymmetric = false;
  bool four_form_invariant = false;  // Omega unchanged under the given rotation
  bool all() const {
    return squares && product && triple_product && skew && omega_antisymmetric && four_form_invariant;
  }
};
TripleChecks triple_checks(const QuaternionTriple& t, const RationalMatrix& rotation);

// S(l, i, j) = (S_{d_i} d_j)^l for
// S_X Y = g(X,Y) xi - g(Y,xi) X + sum_a (g(J_a Y, xi) J_a X - g(X, J_a Y) J_a xi).
// Throws NonIsotropicXi unless xi is a nonzero null vector.
TensorValue qk_structure_S(const QuaternionTriple& t, const Vec& xi);
// max |g(S_X Y, Z) + g(Y, S_X Z)| over basis vectors.
double qk_metric_skew_defect(const QuaternionTriple& t, const TensorValue& S);
// g(X, xi) xi - sum_a g(X, J_a xi) J_a xi
Vec qk_nabla_xi(const QuaternionTriple& t, const Vec& xi, const Vec& x);
// R(X, Y) xi for a field obeying nabla_X xi = qk_nabla_xi(X) on flat space,
// from the product rule on the closed form.
Vec qk_xi_curvature(const QuaternionTriple& t, const Vec& xi, const Vec& x, const Vec& y);

struct WedgeSystem {
  RVec theta;
  std::vector<RVec> constraints;
};

// Constraint covectors theta, theta o J_1, ..., theta o J_count.
WedgeSystem wedge_system(const QuaternionTriple& t, const RVec& theta, int count = 3);
// Exact dim of {F in Lambda^2 : c ^ F = 0 for every constraint c}.
int wedge_kernel_dimension(const WedgeSystem& s);
// Exact rank of the stacked constraint covectors.
int constraint_rank(const WedgeSystem& s);

// theta = g(xi, .)
RVec lower_vector(const QuaternionTriple& t, const RVec& xi);

struct FlatnessReport {
  int p = 0, q = 0;
  bool metric_nondegenerate = false;
  bool xi_isotropic = false;
  // nu g(X, xi) = 0 for all X has only nu = 0
  bool nu_forced_zero = false;
  int constraint_rank = 0;
  int kernel_full = -1;
  int kernel_theta_only = -1;
  int kernel_two_constraints = -1;  // theta, theta o J1
  bool forces_flat = false;
  bool hyperkahler_forces_flat = false;
  bool control_forces_flat = true;  // same chain with J2, J3 removed
};
FlatnessReport flatness_report(int p, int q, const RVec& xi);

}  // namespace pwlab
