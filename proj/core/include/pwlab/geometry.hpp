#pragma once

#include <string>
#include <vector>

#include "pwlab/metric_family.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

// What to compute at a point: Christoffel symbols need first derivatives of
// the metric, curvature second, the covariant derivative of curvature third.
enum class GeometryLevel { Connection = 1, Curvature = 2, CurvatureDerivative = 3 };

// Pointwise connection and curvature data of a metric.
//   gamma(l,i,j)        = Gamma^l_{ij}
//   riemann_up(r,s,m,n) = (R(d_m, d_n) d_s)^r,  R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]
//   riemann(m,n,s,l)    = g(R(d_m, d_n) d_s, d_l)
//   nabla_riemann(k,m,n,s,l) = (nabla_k R)(d_m, d_n, d_s, d_l)
class LocalGeometry {
 public:
  LocalGeometry(const MetricModel& model, const Point& p, GeometryLevel level);

  int dim() const { return dim_; }
  GeometryLevel level() const { return level_; }
  const MetricJet& jet() const { return jet_; }
  const Mat& g() const { return jet_.g; }
  const Mat& ginv() const { return jet_.ginv; }
  const Point& point() const { return p_; }

  double gamma(int l, int i, int j) const { return gamma_[idx3(l, i, j)]; }
  // Partial derivative of Gamma^l_{ij} along coordinate k (zero if inactive).
  double dgamma(int k, int l, int i, int j) const;

  TensorValue christoffel() const;
  const TensorValue& riemann_up() const;
  const TensorValue& riemann() const;
  const TensorValue& nabla_riemann() const;

  // Covariant derivative of a covector field given its value and partials
  // (dtheta(k, j) = d_k theta_j); returns (nabla theta)(k, j).
  Mat covariant_derivative_covector(const Vec& theta, const Mat& dtheta) const;
  // Same for a vector field: returns (nabla_k X)^j as M(k, j).
  Mat covariant_derivative_vector(const Vec& x, const Mat& dx) const;

 private:
  size_t idx3(int a, int b, int c) const { return (size_t(a) * dim_ + b) * dim_ + c; }
  void build_connection();
  void build_curvature();
  void build_curvature_derivative();

  int dim_;
  GeometryLevel level_;
  Point p_;
  MetricJet jet_;
  std::vector<double> gamma_;    // [l][i][j]
  std::vector<double> dgamma_;   // [a][l][i][j], a over active slots
  std::vector<double> ddgamma_;  // [a][b][l][i][j]
  TensorValue riemann_up_;
  TensorValue riemann_;
  TensorValue nabla_riemann_;
};

TensorValue ricci(const LocalGeometry& geo);

// Largest violation of antisymmetry, pair symmetry and first Bianchi.
double riemann_symmetry_defect(const LocalGeometry& geo);
// Largest cyclic sum over (k, m, n) of nabla_k R_{mn..}.
double second_bianchi_defect(const LocalGeometry& geo);

// J(X) Y = R(Y, X) X as a (1,1) matrix M(row = output component, col = input).
Mat jacobi_operator(const LocalGeometry& geo, const Vec& x);
// R(X, Y) as an endomorphism.
Mat curvature_operator(const LocalGeometry& geo, const Vec& x, const Vec& y);

struct ScalarInvariant {
  std::string name;
  int order;
  double value;
};

// Curvature-invariant catalog: order 0 = Kretschmann, Ricci^2, scalar;
// order 1 adds |nabla R|^2, |R . nabla R|^2, squared divergence of R;
// order 2 adds |nabla^2 R|^2 and R . box R, which need the second covariant
// derivative. That one is built from the recurrence nabla R = 4 theta (x) R
// (or is zero when nabla R = 0); `theta`/`dtheta` give the recurrence form.
// Throws std::domain_error if order 2 is requested where neither holds.
std::vector<ScalarInvariant> scalar_invariants(const LocalGeometry& geo, int order,
                                               const Vec* theta = nullptr,
                                               const Mat* dtheta = nullptr);

// Convenience wrappers on the complex-wave family.
TensorValue christoffel(const MetricSpec& spec, const Point& p);
TensorValue riemann(const MetricSpec& spec, const Point& p);
TensorValue ricci(const MetricSpec& spec, const Point& p);
TensorValue nabla_riemann(const MetricSpec& spec, const Point& p);
Mat jacobi_operator(const MetricSpec& spec, const Point& p, const Vec& x);

// Oracle: Christoffel symbols from central differences of metric values
// (numeric inverse), independent of the jet path.
TensorValue christoffel_finite_difference(const MetricModel& model, const Point& p, double h);

}  // namespace pwlab
