#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pwlab/geometry.hpp"
#include "pwlab/kahler.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

// Coordinates (u, v, x1, ..., xn).
namespace wave_coord {
constexpr int u = 0;
constexpr int v = 1;
constexpr int x(int a) { return 2 + a; }
}  // namespace wave_coord

enum class WaveProfileKind { Constant, ScaleInvariant, Polynomial };

// A(u) = M (Constant), M / u^2 (ScaleInvariant) or sum_k M_k u^k (Polynomial).
struct PlaneWaveSpec {
  int n = 1;
  WaveProfileKind kind = WaveProfileKind::Constant;
  std::vector<Mat> matrices;
  std::vector<int> epsilons;  // empty means all +1

  int dim() const { return n + 2; }
  int eps(int a) const { return epsilons.empty() ? 1 : epsilons[size_t(a)]; }
  // Throws std::invalid_argument on shape, symmetry or sign problems.
  void validate() const;
};

PlaneWaveSpec constant_wave(const Mat& a, std::vector<int> epsilons = {});
PlaneWaveSpec scale_invariant_wave(const Mat& b, std::vector<int> epsilons = {});
PlaneWaveSpec polynomial_wave(std::vector<Mat> coefficients, std::vector<int> epsilons = {});

// k-th u-derivative of A at u (k <= 3). DomainError at u = 0 for ScaleInvariant.
Mat wave_profile(const PlaneWaveSpec& spec, double u, int k = 0);

// g = 2 du dv + A_ab x^a x^b du^2 + sum eps_a (dx^a)^2, so g_uv = 1 as in the
// complex family.
class PlaneWaveMetric : public MetricModel {
 public:
  explicit PlaneWaveMetric(PlaneWaveSpec spec);
  int dim() const override { return spec_.dim(); }
  MetricJet jet(const Point& p, int order) const override;
  // |u| for ScaleInvariant, +inf otherwise.
  double singular_distance(const Point& p) const override;
  double singular_approach_rate(const Point& p, const Vec& v) const override;
  std::vector<std::string> coordinate_names() const override;
  const PlaneWaveSpec& spec() const { return spec_; }

 private:
  PlaneWaveSpec spec_;
};

TensorValue plane_wave_metric(const PlaneWaveSpec& spec, const Point& p);

// Fundamental solutions of eps_a f_a'' = A_ab(u) f_b with p_a(u0) = e_a,
// p_a'(u0) = 0, q_a(u0) = 0, q_a'(u0) = e_a. Columns 0..n-1 are p, n..2n-1 are q.
class OscillatorBasis {
 public:
  OscillatorBasis(PlaneWaveSpec spec, double u0, double tol = 1e-13);
  double u0() const { return u0_; }
  const PlaneWaveSpec& spec() const { return spec_; }
  // (Phi, Phi') at u, integrated from u0.
  std::pair<Mat, Mat> at(double u) const;

 private:
  PlaneWaveSpec spec_;
  double u0_;
  double tol_;
};

enum class KillingKind { Dv, Oscillator, ExtraConstant, ExtraScaleInvariant, Translation };

struct KillingField {
  std::string name;
  KillingKind kind;
  std::function<Vec(const Point&)> value;
  // jacobian(p)(k, i) = d_i X^k
  std::function<Mat(const Point&)> jacobian;
};

// X_f = f_a d_x^a - eps_a f_a' x^a d_v for f = p_a, q_a.
KillingField oscillator_field(const OscillatorBasis& basis, int column, const std::string& name);
KillingField dv_field(int n);
// d_u, a Killing field only for constant profiles.
KillingField du_field(int n);
// u d_u - v d_v, a Killing field only for scale-invariant profiles.
KillingField dilation_field(int n);
// d_x^a alone: the negative control.
KillingField translation_field(int n, int a);

// d_v, X_{p_a}, X_{q_a}, plus d_u or u d_u - v d_v when the profile allows it.
std::vector<KillingField> oscillator_killing_fields(const PlaneWaveSpec& spec, double u0);

// max over points of max_ij |(L_X g)_ij|.
double killing_residual(const PlaneWaveSpec& spec, const KillingField& x, const std::vector<Point>& points);

struct HeisenbergTable {
  std::vector<std::string> labels;  // d_v, X_p1.., X_q1..
  Mat dv_coefficient;               // [X_i, X_j] = c_ij d_v (averaged over points)
  double transverse = 0.0;          // largest bracket component off d_v
  double variation = 0.0;           // largest spread of c_ij across points
  // W(f, h) = f^T E h' - h^T E f' on the fundamental solutions at u0;
  // [X_f, X_h] = -W(f, h) d_v.
  Mat wronskian;
};
HeisenbergTable heisenberg_table(const PlaneWaveSpec& spec, double u0, const std::vector<Point>& points);

// max |W(u) - W(u0)| along one integration from u0 to u1.
double wronskian_drift(const PlaneWaveSpec& spec, double u0, double u1, double tol = 1e-13);

struct WaveCurvatureReport {
  // r_uaub(a, b) = R_{uaub} = g(R(d_u, d_b) d_a, d_u); expected -A_ab.
  Mat r_uaub;
  double profile_defect = 0.0;
  double other_components = 0.0;  // |R - (the u a u b pattern)|
  double nabla_r = 0.0;           // max |nabla R|
  double ricci_uu = 0.0;          // expected -sum_a eps_a A_aa
  double ricci_other = 0.0;
  double kretschmann = 0.0;
  double ricci_squared = 0.0;
};
WaveCurvatureReport wave_curvature_and_symmetry(const PlaneWaveSpec& spec, const Point& p);

// S_X Y = g(X, Y) xi - g(xi, Y) X with xi = -(1/u) d_v on a scale-invariant wave.
struct SsiReport {
  ResidualList residuals;  // metric, curvature, structure (max over points)
  double xi_norm = 0.0;    // max |g(xi, xi)|
  double max() const;
};
SsiReport ssi_structure_check(const PlaneWaveSpec& spec, const std::vector<Point>& points);

}  // namespace pwlab
