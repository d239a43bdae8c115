#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pwlab/geometry.hpp"
#include "pwlab/metric_family.hpp"

namespace pwlab {

// J d_w1 = d_w2, J d_z1 = d_z2, J d_xa = d_ya (and J^2 = -1), as a matrix
// acting on column vectors.
Mat standard_J(int n);

// The null vector field xi = -(w1 d_z1 + w2 d_z2) / rho^2 and theta = g(., xi),
// with first partials: dxi(k, l) = d_k xi^l, dtheta(k, j) = d_k theta_j.
struct XiTheta {
  Vec xi;
  Vec theta;
  Mat dxi;
  Mat dtheta;
};
XiTheta xi_and_theta(const MetricSpec& spec, const Point& p);

// Named residual values, kept in insertion order.
using ResidualList = std::vector<std::pair<std::string, double>>;

double max_residual(const ResidualList& r);

// The strongly degenerate linear-type tensor
//   S_X Y = g(X,Y) xi - g(Y,xi) X - g(X,JY) J xi + g(JY,xi) JX
// at a point, with the connection data needed to check it.
// Residuals of nabla~ = nabla - S on g, R and S itself ("metric",
// "curvature", "structure"), for any S(l, i, j) = (S_{d_i} d_j)^l with
// partials dS(k, l, i, j). geo must carry the curvature derivative.
ResidualList canonical_residuals(const LocalGeometry& geo, const TensorValue& S, const TensorValue& dS);

class HomogeneousStructure {
 public:
  HomogeneousStructure(const MetricSpec& spec, const Point& p);

  const LocalGeometry& geometry() const { return geo_; }
  const Mat& J() const { return J_; }
  const XiTheta& fields() const { return xt_; }
  int dim() const { return geo_.dim(); }

  // S(l, i, j) = (S_{d_i} d_j)^l
  double S(int l, int i, int j) const { return S_[idx3(l, i, j)]; }
  // d_k S(l, i, j)
  double dS(int k, int l, int i, int j) const { return dS_[size_t(k) * S_.size() + idx3(l, i, j)]; }
  TensorValue tensor() const;
  // Lowered: S_lower(i, j, k) = g(S_{d_i} d_j, d_k).
  TensorValue lowered() const;

  // The four canonical-connection conditions plus parallel xi and theta.
  ResidualList ambrose_singer_residuals() const;
  // Recurrence-lemma identities: nabla theta, theta and J theta wedged into R,
  // nabla R = 4 theta (x) R, d theta = 0.
  ResidualList lemma_identities() const;
  // Membership in the linear class with zeta = 0, theta_1 read off the
  // trace of S; also isotropy of xi and theta(xi) = (theta o J)(xi) = 0.
  ResidualList linear_type_residuals() const;

 private:
  size_t idx3(int a, int b, int c) const { return (size_t(a) * dim() + b) * dim() + c; }

  LocalGeometry geo_;
  Mat J_;
  XiTheta xt_;
  std::vector<double> S_;
  std::vector<double> dS_;
};

// J^2 + 1, J^T g J - g, nabla J at the point.
ResidualList complex_structure_residuals(const MetricSpec& spec, const Point& p);

struct WalkerReport {
  double null_defect = 0.0;      // Gram block of (d_z1, d_z2)
  double parallel_defect = 0.0;  // components of nabla_X d_zi leaving span{d_z1, d_z2}
  double transport_defect = 0.0; // transported d_z1 versus d_z1 along the radial geodesic
  bool holds(double tol = 1e-11) const {
    return null_defect <= tol && parallel_defect <= tol && transport_defect <= tol;
  }
};
WalkerReport walker_check(const MetricSpec& spec, const std::vector<Point>& samples);

}  // namespace pwlab
