#pragma once

#include <cmath>
#include <random>

#include "pwlab/metric_family.hpp"

namespace testing_support {

// Random base point with rho in [lo, hi] and random fiber coordinates.
inline pwlab::Point random_point(std::mt19937_64& rng, int dim, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> rad(lo, hi), ang(0.0, 6.283185307179586), u(-2.0, 2.0);
  pwlab::Point p(dim);
  const double r = rad(rng), a = ang(rng);
  p[0] = r * std::cos(a);
  p[1] = r * std::sin(a);
  for (int i = 2; i < dim; ++i) p[i] = u(rng);
  return p;
}

inline pwlab::Point base_point(int dim, double w1, double w2) {
  pwlab::Point p = pwlab::Point::Zero(dim);
  p[0] = w1;
  p[1] = w2;
  return p;
}

// Random holomorphic couplings of degree <= max_degree and mixed signs.
inline pwlab::MetricSpec random_spec(std::mt19937_64& rng, int n, pwlab::ProfileKind kind,
                                     bool compensation, int max_degree = 2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pwlab::MetricSpec s;
  s.n = n;
  s.profile.kind = kind;
  s.profile.b0 = kind == pwlab::ProfileKind::Flat ? 0.0 : (u(rng) < 0 ? -1.0 : 1.0) * (0.5 + 3.0 * std::abs(u(rng)));
  s.profile.coupling_compensation = compensation;
  for (int d = 0; d <= 2; ++d) s.profile.harmonic.emplace_back(0.3 * u(rng), 0.3 * u(rng));
  for (int a = 0; a < n; ++a) {
    s.epsilons.push_back(u(rng) < 0 ? -1 : 1);
    pwlab::Coupling c;
    for (int d = 0; d <= max_degree; ++d) c.holomorphic.emplace_back(0.5 * u(rng), 0.5 * u(rng));
    s.couplings.push_back(c);
  }
  return s;
}

}  // namespace testing_support
