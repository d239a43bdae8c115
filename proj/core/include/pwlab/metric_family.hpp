#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pwlab/jets.hpp"
#include "pwlab/tensor.hpp"

namespace pwlab {

using ComplexPoly = std::vector<std::complex<double>>;

enum class ProfileKind { SingularScaleInvariant, CahenWallachAnalog, Flat };

// The wave-front function b: a canonical radial solution of its Poisson
// equation plus the real part of a holomorphic polynomial.
struct Profile {
  ProfileKind kind = ProfileKind::SingularScaleInvariant;
  double b0 = 0.0;
  ComplexPoly harmonic;
  // Adds sum eps_a (r_a^2 + s_a^2) to b. Needed for the curvature to be
  // carried by the Poisson source alone when couplings are not constant.
  bool coupling_compensation = false;

  bool operator==(const Profile&) const = default;
};

// Coupling h_a. Normally a holomorphic polynomial; `raw` replaces (r, s) by
// arbitrary real polynomials (negative controls that break Cauchy-Riemann).
struct Coupling {
  ComplexPoly holomorphic;
  bool raw = false;
  std::vector<Monomial> r_terms;
  std::vector<Monomial> s_terms;

  bool operator==(const Coupling&) const = default;
};

struct MetricSpec {
  int n = 0;
  std::vector<int> epsilons;
  Profile profile;
  std::vector<Coupling> couplings;

  int dim() const { return 2 * n + 4; }
  // Throws std::invalid_argument on inconsistent data.
  void validate() const;
  bool operator==(const MetricSpec&) const = default;
};

// Coordinate slots: w1, w2, z1, z2, then x_a, y_a interleaved.
namespace coord {
constexpr int w1 = 0;
constexpr int w2 = 1;
constexpr int z1 = 2;
constexpr int z2 = 3;
constexpr int x(int a) { return 4 + 2 * a; }
constexpr int y(int a) { return 5 + 2 * a; }
}  // namespace coord

std::vector<std::string> coordinate_names(int n);

// The profile function b (canonical solution + harmonic part).
Jet2 eval_profile_b(const MetricSpec& spec, const Point& p);
// Coefficient of dw^2 actually placed in the metric (profile + compensation).
Jet2 metric_b(const MetricSpec& spec, const Point& p);
// Laplacian target of the profile: b0/rho^4, b0, or 0.
double profile_laplacian_target(const MetricSpec& spec, const Point& p);

struct CouplingJets {
  Jet2 r;
  Jet2 s;
};
std::vector<CouplingJets> eval_couplings(const MetricSpec& spec, const Point& p);

TensorValue metric_components(const MetricSpec& spec, const Point& p);
// Closed-form inverse with B = -b + sum eps_a (r_a^2 + s_a^2).
TensorValue inverse_metric(const MetricSpec& spec, const Point& p);

// Cauchy-Riemann defect max(|d1 s - d2 r|, |d2 s + d1 r|) over couplings,
// for every jet slot up to order 2.
double cauchy_riemann_defect(const MetricSpec& spec, const Point& p);

class ComplexWaveMetric : public MetricModel {
 public:
  explicit ComplexWaveMetric(MetricSpec spec);
  int dim() const override { return spec_.dim(); }
  MetricJet jet(const Point& p, int order) const override;
  double singular_distance(const Point& p) const override;
  double singular_approach_rate(const Point& p, const Vec& v) const override;
  std::vector<std::string> coordinate_names() const override;
  const MetricSpec& spec() const { return spec_; }

 private:
  MetricSpec spec_;
};

// Ready-made specs.
MetricSpec singular_spec(double b0, int n = 0);
MetricSpec cahen_wallach_spec(double b0, int n = 0);
MetricSpec flat_spec(int n = 0);

}  // namespace pwlab
