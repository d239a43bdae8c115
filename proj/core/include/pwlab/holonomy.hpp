#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "pwlab/geometry.hpp"
#include "pwlab/metric_family.hpp"

namespace pwlab {

class DegenerateBasis : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Span of a set of endomorphisms; rank by singular values above
// rel_tol * (largest singular value).
struct EndoSpan {
  std::vector<Mat> generators;
  std::vector<Mat> basis;  // orthonormal (Frobenius) basis of the span
  int dim() const { return int(basis.size()); }
  // Frobenius distance from m to the span.
  double distance(const Mat& m) const;
};

EndoSpan span_of(const std::vector<Mat>& gens, double rel_tol = 1e-9);

// A: d_w1 -> d_z2, d_w2 -> -d_z1, everything else -> 0.
Mat holonomy_generator(int n);

struct CurvatureEndomorphisms {
  EndoSpan span;
  // Best coefficient c with R(d_w1, d_w2) ~ c A, and the leftover.
  double coefficient = 0.0;
  double proportionality_defect = 0.0;
};
CurvatureEndomorphisms curvature_endomorphisms(const MetricSpec& spec, const Point& p);

struct HolonomyResult {
  EndoSpan span;
  std::vector<int> dims;  // dim of m_0, m_1, ...
  bool stabilized = false;
  int orders_used = 0;
};
// Successive spans m_k adding the k-th covariant derivatives of R.
// Second derivatives come from the recurrence nabla R = 4 theta (x) R and are
// only requested when m_1 differs from m_0.
HolonomyResult infinitesimal_holonomy(const MetricSpec& spec, const Point& p, int max_order = 1);

struct InvariantSubspaceReport {
  double e_invariance = 0.0;    // component of A E outside E
  double image_in_null = 0.0;   // component of A E outside span{d_z1, d_z2}
  double kills_complement = 0.0;  // |A E_perp|
  int complement_dim = 0;
  Mat complement;  // columns spanning E_perp
};
InvariantSubspaceReport invariant_subspaces(const MetricSpec& spec, const Point& p);

using CMat2 = Eigen::Matrix2cd;

struct NormalForm {
  double b = 0.0;
  int sign = 0;
  CMat2 matrix;     // A restricted to E in the basis {W, Z}
  CMat2 rescaled;   // |b| * matrix
  CMat2 hermitian_form;  // H_ij = g(e_i, conj e_j)
  double fit_residual = 0.0;   // least-squares residual of A [W Z] = [W Z] M
  double trace = 0.0;
  double square = 0.0;
  double su11_defect = 0.0;  // |M^H H + H M|
};
// W = (d_w1 - i d_w2)/sqrt|b|, Z = W - s sqrt|b| (d_z1 - i d_z2), s = sign b.
// Throws DegenerateBasis when b vanishes at p.
NormalForm su11_normal_form(const MetricSpec& spec, const Point& p);

struct GeneratorChecks {
  double skew = 0.0;       // |g A + A^T g|
  double commutes_J = 0.0; // |[A, J]|
  double nilpotent = 0.0;  // |A^2|
};
GeneratorChecks generator_checks(const MetricSpec& spec, const Point& p);

}  // namespace pwlab
