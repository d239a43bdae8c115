#include "pwlab/integrator.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace pwlab {

std::string to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Completed:
      return "Completed";
    case IntegrationStatus::SingularityReached:
      return "SingularityReached";
    case IntegrationStatus::StepUnderflow:
      return "StepUnderflow";
    case IntegrationStatus::BlowUp:
      return "BlowUp";
  }
  return "Unknown";
}

IntegrationResult integrate_adaptive(const OdeRhs& rhs, OdeState& x, double t0, double t1,
                                     const IntegratorOptions& opt, const StepHooks& hooks) {
  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_dopri5<OdeState>;
  auto stepper = odeint::make_controlled<Stepper>(opt.abs_tol, opt.rel_tol);
  auto system = [&rhs](const OdeState& s, OdeState& ds, double t) { rhs(s, ds, t); };

  IntegrationResult res;
  res.t = t0;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(opt.initial_step, std::abs(t1 - t0));
  if (hooks.observe) hooks.observe(x, t);

  auto finite = [](const OdeState& s) {
    return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
  };

  while (dir * (t1 - t) > 0.0) {
    if (hooks.halt) {
      const IntegrationStatus h = hooks.halt(x, t);
      if (h != IntegrationStatus::Completed) {
        res.status = h;
        res.t = t;
        return res;
      }
    }
    const double remaining = std::abs(t1 - t);
    double cap = std::min(opt.max_step, remaining);
    if (hooks.max_step) cap = std::min(cap, hooks.max_step(x, t));
    double h = std::min(std::abs(dt), cap);
    if (h < opt.min_step && remaining > opt.min_step) {
      res.status = IntegrationStatus::StepUnderflow;
      res.t = t;
      return res;
    }
    dt = dir * h;
    const bool last = h == remaining;
    const double t_before = t;
    const auto outcome = stepper.try_step(system, x, t, dt);
    if (outcome == odeint::success) {
      if (last) t = t1;
      ++res.accepted;
      if (!finite(x)) {
        res.status = IntegrationStatus::BlowUp;
        res.t = t;
        return res;
      }
      if (hooks.observe) hooks.observe(x, t);
      if (res.accepted >= opt.max_steps) {
        res.status = IntegrationStatus::StepUnderflow;
        res.t = t;
        return res;
      }
    } else {
      ++res.rejected;
      if (t != t_before) t = t_before;
    }
  }
  res.status = IntegrationStatus::Completed;
  res.t = t;
  return res;
}

}  // namespace pwlab
