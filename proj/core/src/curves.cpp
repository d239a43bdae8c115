#include "pwlab/curves.hpp"

#include <cmath>
#include <limits>

#include "pwlab/geometry.hpp"
#include "pwlab/spec_io.hpp"

namespace pwlab {

double metric_norm(const Mat& g, const Vec& v) { return v.dot(g * v); }

namespace {

double norm_scale(const Mat& g, const Vec& v) {
  double s = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) s += std::abs(g(i, j) * v[i] * v[j]);
  return s;
}

// Geodesic plus `nframe` transported vectors packed as [x, v, E_1, ..., E_m].
OdeRhs transport_rhs(const MetricModel& model, int nframe) {
  return [&model, nframe](const OdeState& s, OdeState& ds, double) {
    const int D = model.dim();
    Point x = Eigen::Map<const Vec>(s.data(), D);
    const LocalGeometry geo(model, x, GeometryLevel::Connection);
    const double* v = s.data() + D;
    for (int i = 0; i < D; ++i) ds[size_t(i)] = v[i];
    for (int l = 0; l < D; ++l) {
      double acc = 0.0;
      for (int i = 0; i < D; ++i) {
        if (v[i] == 0.0) continue;
        for (int j = 0; j < D; ++j) acc += geo.gamma(l, i, j) * v[i] * v[j];
      }
      ds[size_t(D + l)] = -acc;
    }
    for (int f = 0; f < nframe; ++f) {
      const double* e = s.data() + size_t(2 + f) * D;
      for (int l = 0; l < D; ++l) {
        double acc = 0.0;
        for (int i = 0; i < D; ++i) {
          if (v[i] == 0.0) continue;
          for (int j = 0; j < D; ++j) acc += geo.gamma(l, i, j) * v[i] * e[j];
        }
        ds[size_t(2 + f) * D + l] = -acc;
      }
    }
  };
}

StepHooks singularity_hooks(const MetricModel& model, const GeodesicOptions& opt) {
  StepHooks hooks;
  const int D = model.dim();
  hooks.halt = [&model, D, rho_min = opt.rho_min](const OdeState& s, double) {
    const Point x = Eigen::Map<const Vec>(s.data(), D);
    return model.singular_distance(x) < rho_min ? IntegrationStatus::SingularityReached
                                                : IntegrationStatus::Completed;
  };
  hooks.max_step = [&model, D, frac = opt.approach_fraction](const OdeState& s, double) {
    const Point x = Eigen::Map<const Vec>(s.data(), D);
    const Vec v = Eigen::Map<const Vec>(s.data() + D, D);
    const double dist = model.singular_distance(x);
    const double rate = model.singular_approach_rate(x, v);
    if (!std::isfinite(dist) || rate <= 0.0) return std::numeric_limits<double>::infinity();
    return frac * dist / rate;
  };
  return hooks;
}

IntegratorOptions integrator_options(double tol) {
  IntegratorOptions io;
  io.abs_tol = tol;
  io.rel_tol = tol;
  io.initial_step = 1e-3;
  io.min_step = 1e-15;
  return io;
}

}  // namespace

Trajectory geodesic_integrate(const MetricModel& model, const GeodesicState& init, double t_end,
                              const GeodesicOptions& opt) {
  const int D = model.dim();
  if (init.x.size() != D || init.v.size() != D)
    throw std::invalid_argument("geodesic initial state has wrong dimension");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  Trajectory traj;
  traj.coordinate_names = model.coordinate_names();

  const Mat g0 = model.jet(init.x, 0).g;
  const double n0 = metric_norm(g0, init.v);

  OdeState s(size_t(2 * D));
  for (int i = 0; i < D; ++i) {
    s[size_t(i)] = init.x[i];
    s[size_t(D + i)] = init.v[i];
  }
  StepHooks hooks = singularity_hooks(model, opt);
  hooks.observe = [&](const OdeState& st, double t) {
    TrajectoryRow row;
    row.t = t;
    row.x = Eigen::Map<const Vec>(st.data(), D);
    row.v = Eigen::Map<const Vec>(st.data() + D, D);
    const Mat g = model.jet(row.x, 0).g;
    row.norm_drift = std::abs(metric_norm(g, row.v) - n0) / std::max(1.0, norm_scale(g, row.v));
    traj.rows.push_back(std::move(row));
  };
  try {
    const auto res = integrate_adaptive(transport_rhs(model, 0), s, init.t, t_end,
                                        integrator_options(opt.tol), hooks);
    traj.status = res.status;
    traj.t_stop = res.t;
  } catch (const DomainError&) {
    traj.status = IntegrationStatus::SingularityReached;
    traj.t_stop = traj.rows.empty() ? init.t : traj.rows.back().t;
  }
  return traj;
}

Trajectory geodesic_integrate(const MetricSpec& spec, const GeodesicState& init, double t_end,
                              const GeodesicOptions& opt) {
  return geodesic_integrate(ComplexWaveMetric(spec), init, t_end, opt);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t";
  for (const auto& n : traj.coordinate_names) out << ',' << n;
  out << ",norm_drift,flag\n";
  for (size_t k = 0; k < traj.rows.size(); ++k) {
    const auto& r = traj.rows[k];
    out << format_double(r.t);
    for (int i = 0; i < r.x.size(); ++i) out << ',' << format_double(r.x[i]);
    out << ',' << format_double(r.norm_drift) << ','
        << (k + 1 == traj.rows.size() ? to_string(traj.status) : std::string("ok")) << '\n';
  }
}

TransportResult parallel_transport(const MetricModel& model, const GeodesicState& init,
                                   const std::vector<Vec>& frame0, const std::vector<double>& times,
                                   const GeodesicOptions& opt) {
  const int D = model.dim();
  const int m = int(frame0.size());
  OdeState s(size_t(2 + m) * D);
  for (int i = 0; i < D; ++i) {
    s[size_t(i)] = init.x[i];
    s[size_t(D + i)] = init.v[i];
  }
  for (int f = 0; f < m; ++f)
    for (int i = 0; i < D; ++i) s[size_t(2 + f) * D + i] = frame0[size_t(f)][i];

  TransportResult out;
  const OdeRhs rhs = transport_rhs(model, m);
  const StepHooks hooks = singularity_hooks(model, opt);
  const IntegratorOptions io = integrator_options(opt.tol);

  auto sample = [&](double t) {
    FrameSample fs;
    fs.t = t;
    fs.x = Eigen::Map<const Vec>(s.data(), D);
    fs.v = Eigen::Map<const Vec>(s.data() + D, D);
    for (int f = 0; f < m; ++f) fs.frame.push_back(Eigen::Map<const Vec>(s.data() + size_t(2 + f) * D, D));
    const Mat g = model.jet(fs.x, 0).g;
    fs.gram = Mat(m, m);
    Mat scale(m, m);
    const Mat ga = g.cwiseAbs();
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        fs.gram(a, b) = fs.frame[size_t(a)].dot(g * fs.frame[size_t(b)]);
        scale(a, b) = std::max(1.0, fs.frame[size_t(a)].cwiseAbs().dot(ga * fs.frame[size_t(b)].cwiseAbs()));
      }
    return std::pair{fs, scale};
  };

  double t = init.t;
  Mat gram0;
  for (double target : times) {
    if (target < t) throw std::invalid_argument("sample times must be increasing");
    if (target > t) {
      try {
        const auto res = integrate_adaptive(rhs, s, t, target, io, hooks);
        if (res.status != IntegrationStatus::Completed) {
          out.status = res.status;
          return out;
        }
      } catch (const DomainError&) {
        out.status = IntegrationStatus::SingularityReached;
        return out;
      }
      t = target;
    }
    auto [fs, scale] = sample(t);
    out.samples.push_back(std::move(fs));
    if (out.samples.size() == 1) gram0 = out.samples.front().gram;
    out.max_gram_drift = std::max(
        out.max_gram_drift, (out.samples.back().gram - gram0).cwiseAbs().cwiseQuotient(scale).maxCoeff());
  }
  return out;
}

std::vector<CurvatureSample> parallel_frame_curvature(const MetricSpec& spec,
                                                      const std::vector<double>& times,
                                                      double tol) {
  if (spec.profile.kind != ProfileKind::SingularScaleInvariant)
    throw std::invalid_argument("parallel frame curvature needs the singular profile");
  const ComplexWaveMetric model(spec);
  const int D = spec.dim();
  GeodesicState init;
  init.x = Point::Zero(D);
  init.x[coord::w1] = 1.0;
  init.v = Vec::Zero(D);
  init.v[coord::w1] = -1.0;
  const double b_start = metric_b(spec, init.x).value();
  const double scale = 1.0 / std::sqrt(std::abs(b_start));
  Vec e1 = Vec::Zero(D), e2 = Vec::Zero(D);
  e1[coord::w1] = scale;
  e2[coord::w2] = scale;

  GeodesicOptions opt;
  opt.tol = tol;
  const TransportResult tr = parallel_transport(model, init, {e1, e2}, times, opt);
  std::vector<CurvatureSample> out;
  for (const auto& fs : tr.samples) {
    const LocalGeometry geo(model, fs.x, GeometryLevel::Curvature);
    const TensorValue& R = geo.riemann();
    const Vec& a = fs.frame[0];
    const Vec& b = fs.frame[1];
    double v = 0.0;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        for (int k = 0; k < D; ++k)
          for (int l = 0; l < D; ++l) v += R(i, j, k, l) * a[i] * b[j] * a[k] * b[l];
    const double pred = spec.profile.b0 / (2.0 * b_start * b_start) * std::pow(1.0 - fs.t, -4.0);
    out.push_back({fs.t, v, pred});
  }
  return out;
}

}  // namespace pwlab
