#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "pwlab/exact.hpp"
#include "pwlab/integrator.hpp"
#include "pwlab/metric_family.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

// Basis slots of the transvection algebra: the holonomy generator A first,
// then the coordinate vectors at the reference point.
namespace lie_basis {
constexpr int A = 0;
constexpr int w1 = 1;
constexpr int w2 = 2;
constexpr int z1 = 3;
constexpr int z2 = 4;
constexpr int x(int a) { return 5 + 2 * a; }
constexpr int y(int a) { return 6 + 2 * a; }
}  // namespace lie_basis

class LieAlgebra {
 public:
  LieAlgebra(int n, Rational b_p, Rational b0, std::vector<int> epsilons = {});

  int n() const { return n_; }
  int dim() const { return dim_; }
  const Rational& b_p() const { return b_p_; }
  const Rational& b0() const { return b0_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& epsilons() const { return eps_; }

  // [e_i, e_j] = sum_k c(i, j, k) e_k
  const Rational& c(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  // Sets [e_i, e_j] = v and [e_j, e_i] = -v.
  void set_bracket(int i, int j, const RVec& v);
  RVec bracket(int i, int j) const;
  RVec bracket(const RVec& x, const RVec& y) const;
  RVec unit(int i) const;

 private:
  size_t idx(int i, int j, int k) const { return (size_t(i) * dim_ + j) * dim_ + k; }
  int n_;
  int dim_;
  Rational b_p_, b0_;
  std::vector<int> eps_;
  std::vector<std::string> labels_;
  std::vector<Rational> c_;
};

// Structure constants of the transvection algebra in the basis
// [A, w1, w2, z1, z2, x1, y1, ...], with b_p = b(p).
// [x_a, y_a] = -2 eps_a B; empty epsilons means all +1.
LieAlgebra build_algebra(int n, const Rational& b_p, const Rational& b0, const std::vector<int>& epsilons = {});

// Largest |[[e_i,e_j],e_k] + cyclic| over all basis triples (exact).
Rational jacobi_residual(const LieAlgebra& alg);

// Negative control: negates the single structure constant c(i, j, k).
void flip_bracket(LieAlgebra& alg, int i, int j, int k);

struct StructureDiagnostics {
  std::vector<int> derived_series;        // dims of g, [g,g], ...
  std::vector<int> lower_central_series;  // dims of g, [g,g], [g,[g,g]], ...
  bool solvable = false;
  int derived_length = 0;
  bool nilpotent = false;
  // span{A, z1, z2, x_a, y_a}
  bool nilradical_is_ideal = false;
  bool nilradical_contains_derived = false;
  bool nilradical_two_step = false;  // [n,[n,n]] = 0
  int nilradical_class = 0;          // 1 when abelian (n = 0), else 2
  // No element outside n has nilpotent ad: min over directions in span{w1,w2}
  // of the spectral radius of ad, certified by a Lipschitz bound.
  bool nilradical_maximal = false;
  double maximal_margin = 0.0;
  // span{B, x_a, y_a} with B = z2 - A: [x_a, y_b] = -2 eps_a delta_ab B, B central.
  bool heisenberg = false;
};
StructureDiagnostics structure_diagnostics(const LieAlgebra& alg);

// Brackets read off the geometry at p = (1, 0, ...):
// [A, X] = A X, [X, Y] = S_X Y - S_Y X - R~_{XY}, with R~ = R - R^S along A.
// Returned as doubles c(i, j, k) in the same basis as build_algebra.
struct GeometricBrackets {
  int dim = 0;
  std::vector<double> c;
  double proportionality_defect = 0.0;  // R~_{XY} off the line of A
  double at(int i, int j, int k) const { return c[(size_t(i) * dim + j) * dim + k]; }
};
GeometricBrackets geometric_brackets(const MetricSpec& spec, const Point& p);

struct CanonicalCurvature {
  TensorValue rs;     // (R^S_{d_i d_j})^l_m stored as (l, m, i, j)
  TensorValue tilde;  // R - R^S, same layout
  double formula_defect = 0.0;    // R^S vs -2 g(X,JY)(g(xi,JZ) xi + g(Z,xi) J xi)
  double generator_defect = 0.0;  // R^S vs -2 omega(X,Y) A
  double tilde_defect = 0.0;      // R~ vs (b0/2 dw1^dw2 + 2 omega) A
};
// p must have (w1, w2) = (1, 0).
CanonicalCurvature canonical_curvature(const MetricSpec& spec, const Point& p);

// Upper-triangular matrix of the parameter vector (t, w1, w2, z1, z2, x_a, y_a),
// entries transcribed verbatim (including the constant entry), with
// lambda = 2 b_p and mu = b0 / 2.
Eigen::MatrixXcd table_matrix(int n, double b_p, double b0, const Eigen::VectorXd& params);

struct RepPair {
  int i, j;
  double mismatch;  // |[rho e_i, rho e_j] - rho [e_i, e_j]|
};
struct RepCheck {
  double affine_defect = 0.0;     // |M(0)|
  double linearity_defect = 0.0;  // |rho(2 x1) - 2 rho(x1)| for the linear part
  bool isotropy_matches = false;  // rho(A) is a single 2 at row 0 of the last-but-one column
  std::vector<RepPair> pairs;
  int matched = 0;
  int mismatched = 0;
};
RepCheck matrix_rep_check(const LieAlgebra& alg, double tol = 1e-9);

struct KGeodesicRow {
  double t, u, v, x, y, x_closed, y_closed;
};
struct KGeodesicResult {
  std::vector<KGeodesicRow> rows;
  IntegrationStatus status = IntegrationStatus::Completed;
  double t_stop = 0.0;
  // x = sqrt|b_p| / (t - c), y = K (t - c); no pole when x(t0) = 0.
  bool has_pole = false;
  double c = 0.0;
  double K = 0.0;
  bool pole_ahead = false;  // the pole lies between t0 and t_end
  double max_rel_error_x = 0.0;  // on the first 90% of the pre-pole interval
  double max_rel_error_y = 0.0;
};
struct KGeodesicOptions {
  double tol = 1e-12;
  double blowup_threshold = 1e8;
};
// u' = -(uv + v^2)/sqrt|b_p|, v' = -(uv + u^2)/sqrt|b_p| from t0 to t_end
// (either direction).
KGeodesicResult k_geodesic(double b_p, double u0, double v0, double t0, double t_end,
                           const KGeodesicOptions& opt = {});

}  // namespace pwlab
