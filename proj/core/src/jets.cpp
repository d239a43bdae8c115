#include "pwlab/jets.hpp"

#include <cmath>

namespace pwlab {

namespace {

constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

// Variable sequence for each slot, e.g. slot (2,1) -> {0,0,1}.
struct SlotVars {
  int order;
  int v[3];
};

constexpr SlotVars kVars[Jet2::kSize] = {
    {0, {0, 0, 0}}, {1, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 0, 0}}, {2, {0, 1, 0}},
    {2, {1, 1, 0}}, {3, {0, 0, 0}}, {3, {0, 0, 1}}, {3, {0, 1, 1}}, {3, {1, 1, 1}}};

double grab(const Jet2& f, int a) { return f.d(a == 0 ? 1 : 0, a == 1 ? 1 : 0); }
double grab(const Jet2& f, int a, int b) {
  return f.d((a == 0) + (b == 0), (a == 1) + (b == 1));
}
double grab(const Jet2& f, int a, int b, int c) {
  return f.d((a == 0) + (b == 0) + (c == 0), (a == 1) + (b == 1) + (c == 1));
}

}  // namespace

Jet2 Jet2::variable(double value, int var) {
  Jet2 j(value);
  j.c_[var == 0 ? slot(1, 0) : slot(0, 1)] = 1.0;
  return j;
}

Jet2 Jet2::derivative(int var) const {
  Jet2 r;
  for (int i = 0; i < kOrder; ++i)
    for (int j = 0; i + j < kOrder; ++j)
      r.at(i, j) = var == 0 ? d(i + 1, j) : d(i, j + 1);
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  for (int i = 0; i <= Jet2::kOrder; ++i)
    for (int j = 0; i + j <= Jet2::kOrder; ++j) {
      double acc = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q)
          acc += kBinom[i][p] * kBinom[j][q] * a.d(p, q) * b.d(i - p, j - q);
      r.at(i, j) = acc;
    }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

Jet2 Jet2::compose(double p0, double p1, double p2, double p3) const {
  Jet2 r;
  r.c_[0] = p0;
  for (int k = 1; k < kSize; ++k) {
    const SlotVars& s = kVars[k];
    if (s.order == 1) {
      r.c_[k] = p1 * grab(*this, s.v[0]);
    } else if (s.order == 2) {
      const int a = s.v[0], b = s.v[1];
      r.c_[k] = p2 * grab(*this, a) * grab(*this, b) + p1 * grab(*this, a, b);
    } else {
      const int a = s.v[0], b = s.v[1], c = s.v[2];
      r.c_[k] = p3 * grab(*this, a) * grab(*this, b) * grab(*this, c) +
                p2 * (grab(*this, a, b) * grab(*this, c) + grab(*this, a, c) * grab(*this, b) +
                      grab(*this, b, c) * grab(*this, a)) +
                p1 * grab(*this, a, b, c);
    }
  }
  return r;
}

Jet2 reciprocal(const Jet2& a) {
  const double v = a.value();
  if (v == 0.0) throw DomainError("division by a jet with zero value");
  const double i1 = 1.0 / v;
  const double i2 = i1 * i1;
  return a.compose(i1, -i2, 2.0 * i2 * i1, -6.0 * i2 * i2);
}

Jet2 sqrt(const Jet2& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw DomainError("sqrt of a jet with nonpositive value");
  const double s = std::sqrt(v);
  return a.compose(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

Jet2 pow(const Jet2& a, int k) {
  if (k < 0) return reciprocal(pow(a, -k));
  Jet2 result(1.0);
  Jet2 base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

Jet1& Jet1::operator+=(const Jet1& o) {
  for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet1& Jet1::operator-=(const Jet1& o) {
  for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet1& Jet1::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
  Jet1 r;
  for (int k = 0; k < Jet1::kSize; ++k) {
    double acc = 0.0;
    for (int p = 0; p <= k; ++p) acc += kBinom[k][p] * a.c_[p] * b.c_[k - p];
    r.c_[k] = acc;
  }
  return r;
}

Jet1 operator/(const Jet1& a, const Jet1& b) { return a * reciprocal(b); }

Jet1 Jet1::compose(double p0, double p1, double p2, double p3) const {
  Jet1 r;
  const double f1 = c_[1], f2 = c_[2], f3 = c_[3];
  r.c_[0] = p0;
  r.c_[1] = p1 * f1;
  r.c_[2] = p2 * f1 * f1 + p1 * f2;
  r.c_[3] = p3 * f1 * f1 * f1 + 3.0 * p2 * f1 * f2 + p1 * f3;
  return r;
}

Jet1 reciprocal(const Jet1& a) {
  const double v = a.value();
  if (v == 0.0) throw DomainError("division by a jet with zero value");
  const double i1 = 1.0 / v;
  const double i2 = i1 * i1;
  return a.compose(i1, -i2, 2.0 * i2 * i1, -6.0 * i2 * i2);
}

Jet1 pow(const Jet1& a, int k) {
  if (k < 0) return reciprocal(pow(a, -k));
  Jet1 result(1.0);
  for (int i = 0; i < k; ++i) result = result * a;
  return result;
}

ComplexJet operator*(const ComplexJet& a, const ComplexJet& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

std::pair<Jet2, Jet2> complex_poly_eval(const std::vector<std::complex<double>>& coeffs,
                                        double w1, double w2) {
  const ComplexJet w{Jet2::variable(w1, 0), Jet2::variable(w2, 1)};
  ComplexJet acc{Jet2(), Jet2()};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * w;
    acc.re += Jet2(it->real());
    acc.im += Jet2(it->imag());
  }
  return {acc.re, -acc.im};
}

Jet2 real_poly_eval(const std::vector<Monomial>& terms, double w1, double w2) {
  const Jet2 x = Jet2::variable(w1, 0);
  const Jet2 y = Jet2::variable(w2, 1);
  Jet2 acc;
  for (const Monomial& m : terms) acc += m.coeff * (pow(x, m.i) * pow(y, m.j));
  return acc;
}

}  // namespace pwlab
