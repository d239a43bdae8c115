#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pwlab {

// Raised when a jet operation would leave the domain of the function
// (division by a jet with zero value, sqrt of a nonpositive value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Truncated Taylor data in the two base variables (w1, w2), total order <= 3.
// Slots hold raw partial derivatives d^{i+j} f / dw1^i dw2^j, not Taylor
// coefficients.
class Jet2 {
 public:
  static constexpr int kOrder = 3;
  static constexpr int kSize = 10;

  Jet2() { c_.fill(0.0); }
  explicit Jet2(double value) {
    c_.fill(0.0);
    c_[0] = value;
  }

  // Coordinate w_{var+1} seeded at the given value.
  static Jet2 variable(double value, int var);

  static constexpr int slot(int i, int j) {
    // ordering (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3)
    const int k = i + j;
    return k * (k + 1) / 2 + j;
  }

  double value() const { return c_[0]; }
  double d(int i, int j) const {
    return (i < 0 || j < 0 || i + j > kOrder) ? 0.0 : c_[slot(i, j)];
  }
  double& at(int i, int j) { return c_[slot(i, j)]; }
  const std::array<double, kSize>& raw() const { return c_; }
  std::array<double, kSize>& raw() { return c_; }

  // First derivative in variable 0 or 1 (order-3 information is lost).
  Jet2 derivative(int var) const;
  double laplacian() const { return d(2, 0) + d(0, 2); }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator*=(double s);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator+(Jet2 a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet2 operator-(Jet2 a, double s) {
    a.c_[0] -= s;
    return a;
  }
  Jet2 operator-() const {
    Jet2 r = *this;
    for (double& x : r.c_) x = -x;
    return r;
  }

  // phi(f) for a univariate phi given by phi, phi', phi'', phi''' at f.value().
  Jet2 compose(double p0, double p1, double p2, double p3) const;

 private:
  std::array<double, kSize> c_;
};

Jet2 reciprocal(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 pow(const Jet2& a, int k);

// Univariate counterpart used for profiles depending on one variable.
class Jet1 {
 public:
  static constexpr int kSize = 4;

  Jet1() { c_.fill(0.0); }
  explicit Jet1(double value) {
    c_.fill(0.0);
    c_[0] = value;
  }
  static Jet1 variable(double value) {
    Jet1 j(value);
    j.c_[1] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double d(int k) const { return (k < 0 || k >= kSize) ? 0.0 : c_[k]; }
  double& at(int k) { return c_[k]; }

  Jet1& operator+=(const Jet1& o);
  Jet1& operator-=(const Jet1& o);
  Jet1& operator*=(double s);
  friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
  friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
  friend Jet1 operator*(const Jet1& a, const Jet1& b);
  friend Jet1 operator/(const Jet1& a, const Jet1& b);
  friend Jet1 operator*(Jet1 a, double s) { return a *= s; }
  friend Jet1 operator*(double s, Jet1 a) { return a *= s; }

  Jet1 compose(double p0, double p1, double p2, double p3) const;

 private:
  std::array<double, kSize> c_;
};

Jet1 reciprocal(const Jet1& a);
Jet1 pow(const Jet1& a, int k);

// Real and imaginary parts of a complex-valued function of (w1, w2).
struct ComplexJet {
  Jet2 re;
  Jet2 im;
};

ComplexJet operator*(const ComplexJet& a, const ComplexJet& b);

// h(w) = sum c_k w^k with w = w1 + i w2, returned as (r, s) = (Re h, -Im h).
std::pair<Jet2, Jet2> complex_poly_eval(const std::vector<std::complex<double>>& coeffs,
                                        double w1, double w2);

// Real polynomial sum c * w1^i * w2^j.
struct Monomial {
  double coeff = 0.0;
  int i = 0;
  int j = 0;
  bool operator==(const Monomial&) const = default;
};
Jet2 real_poly_eval(const std::vector<Monomial>& terms, double w1, double w2);

}  // namespace pwlab
