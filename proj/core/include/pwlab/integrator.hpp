#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace pwlab {

enum class IntegrationStatus { Completed, SingularityReached, StepUnderflow, BlowUp };

std::string to_string(IntegrationStatus s);

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& x, OdeState& dxdt, double t)>;

struct IntegratorOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

// Optional per-step hooks.
struct StepHooks {
  // Upper bound on the next step size given the current state.
  std::function<double(const OdeState&, double)> max_step;
  // Returns a non-Completed status to stop before the next step.
  std::function<IntegrationStatus(const OdeState&, double)> halt;
  // Called after every accepted step (and once for the initial state).
  std::function<void(const OdeState&, double)> observe;
};

struct IntegrationResult {
  IntegrationStatus status = IntegrationStatus::Completed;
  double t = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Embedded 5(4) Dormand-Prince pair with error control; x is advanced in
// place from t0 towards t1 (either direction) and ends exactly at t1 on
// completion.
IntegrationResult integrate_adaptive(const OdeRhs& rhs, OdeState& x, double t0, double t1,
                                     const IntegratorOptions& opt, const StepHooks& hooks = {});

}  // namespace pwlab
