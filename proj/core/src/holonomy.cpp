#include "pwlab/holonomy.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "pwlab/kahler.hpp"

namespace pwlab {

double EndoSpan::distance(const Mat& m) const {
  Mat r = m;
  for (const Mat& b : basis) r -= (b.array() * m.array()).sum() * b;
  return r.norm();
}

EndoSpan span_of(const std::vector<Mat>& gens, double rel_tol) {
  EndoSpan out;
  out.generators = gens;
  if (gens.empty()) return out;
  const Eigen::Index rows = gens.front().rows(), cols = gens.front().cols();
  Mat stack(rows * cols, Eigen::Index(gens.size()));
  for (size_t k = 0; k < gens.size(); ++k) stack.col(Eigen::Index(k)) = gens[k].reshaped();
  const Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) out.basis.push_back(svd.matrixU().col(i).reshaped(rows, cols));
  return out;
}

Mat holonomy_generator(int n) {
  const int D = 2 * n + 4;
  Mat a = Mat::Zero(D, D);
  a(coord::z2, coord::w1) = 1.0;
  a(coord::z1, coord::w2) = -1.0;
  return a;
}

namespace {

std::vector<Mat> curvature_generators(const LocalGeometry& geo) {
  const int D = geo.dim();
  std::vector<Mat> gens;
  for (int i = 0; i < D; ++i)
    for (int j = i + 1; j < D; ++j) gens.push_back(curvature_operator(geo, Vec::Unit(D, i), Vec::Unit(D, j)));
  return gens;
}

// (nabla_k R)(d_m, d_n) as an endomorphism: M(l, s) = g^{lq} nabla_k R_{mnsq}.
Mat derivative_endomorphism(const LocalGeometry& geo, const TensorValue& NR, int k, int m, int n) {
  const int D = geo.dim();
  Mat low(D, D);
  for (int s = 0; s < D; ++s)
    for (int q = 0; q < D; ++q) low(s, q) = NR(k, m, n, s, q);
  return geo.ginv() * low.transpose();
}

}  // namespace

CurvatureEndomorphisms curvature_endomorphisms(const MetricSpec& spec, const Point& p) {
  const LocalGeometry geo(ComplexWaveMetric(spec), p, GeometryLevel::Curvature);
  CurvatureEndomorphisms out;
  out.span = span_of(curvature_generators(geo));
  const Mat a = holonomy_generator(spec.n);
  const Mat r12 = curvature_operator(geo, Vec::Unit(spec.dim(), coord::w1), Vec::Unit(spec.dim(), coord::w2));
  out.coefficient = (r12.array() * a.array()).sum() / a.squaredNorm();
  out.proportionality_defect = (r12 - out.coefficient * a).cwiseAbs().maxCoeff();
  return out;
}

HolonomyResult infinitesimal_holonomy(const MetricSpec& spec, const Point& p, int max_order) {
  if (max_order < 0 || max_order > 2) throw std::invalid_argument("holonomy order must be 0, 1 or 2");
  const ComplexWaveMetric model(spec);
  const LocalGeometry geo(model, p, max_order >= 1 ? GeometryLevel::CurvatureDerivative : GeometryLevel::Curvature);
  const int D = geo.dim();
  HolonomyResult out;
  std::vector<Mat> gens = curvature_generators(geo);
  out.span = span_of(gens);
  out.dims.push_back(out.span.dim());
  if (max_order == 0) return out;

  const TensorValue& NR = geo.nabla_riemann();
  for (int k = 0; k < D; ++k)
    for (int m = 0; m < D; ++m)
      for (int n = m + 1; n < D; ++n) gens.push_back(derivative_endomorphism(geo, NR, k, m, n));
  out.span = span_of(gens);
  out.dims.push_back(out.span.dim());
  out.orders_used = 1;
  if (out.dims[1] == out.dims[0]) {
    out.stabilized = true;
    return out;
  }
  if (max_order < 2) return out;

  // nabla^2_{f e} R = 4 (nabla_f theta)_e R + 4 theta_e nabla_f R
  const HomogeneousStructure hs(spec, p);
  const Vec& th = hs.fields().theta;
  double rec = 0.0;
  const TensorValue& R = geo.riemann();
  for (int k = 0; k < D; ++k)
    for (size_t q = 0; q < R.size(); ++q)
      rec = std::max(rec, std::abs(NR.data()[size_t(k) * R.size() + q] - 4.0 * th[k] * R.data()[q]));
  if (rec > 1e-9 * std::max(1.0, NR.max_abs()))
    throw std::domain_error("second-order holonomy needs the recurrence nabla R = 4 theta (x) R");
  const Mat nth = geo.covariant_derivative_covector(th, hs.fields().dtheta);
  for (int f = 0; f < D; ++f)
    for (int e = 0; e < D; ++e)
      for (int m = 0; m < D; ++m)
        for (int n = m + 1; n < D; ++n) {
          const Mat rmn = curvature_operator(geo, Vec::Unit(D, m), Vec::Unit(D, n));
          gens.push_back(4.0 * nth(f, e) * rmn + 4.0 * th[e] * derivative_endomorphism(geo, NR, f, m, n));
        }
  out.span = span_of(gens);
  out.dims.push_back(out.span.dim());
  out.orders_used = 2;
  out.stabilized = out.dims[2] == out.dims[1];
  return out;
}

InvariantSubspaceReport invariant_subspaces(const MetricSpec& spec, const Point& p) {
  const int D = spec.dim();
  const Mat g = metric_components(spec, p).as_matrix();
  const Mat a = holonomy_generator(spec.n);
  InvariantSubspaceReport rep;
  for (int j = 0; j < 4; ++j) {
    const Vec img = a.col(j);
    for (int i = 4; i < D; ++i) rep.e_invariance = std::max(rep.e_invariance, std::abs(img[i]));
    for (int i = 0; i < D; ++i)
      if (i != coord::z1 && i != coord::z2) rep.image_in_null = std::max(rep.image_in_null, std::abs(img[i]));
  }
  // E_perp = {v : g(v, e_i) = 0, i < 4}
  const Mat constraints = g.topRows(4);
  const Eigen::FullPivLU<Mat> lu(constraints);
  rep.complement = lu.kernel();
  rep.complement_dim = D - 4 == 0 ? 0 : int(rep.complement.cols());
  if (rep.complement_dim == 0) rep.complement = Mat(D, 0);
  if (rep.complement_dim > 0) rep.kills_complement = (a * rep.complement).cwiseAbs().maxCoeff();
  return rep;
}

NormalForm su11_normal_form(const MetricSpec& spec, const Point& p) {
  const int D = spec.dim();
  NormalForm nf;
  nf.b = metric_b(spec, p).value();
  if (nf.b == 0.0) throw DegenerateBasis("b vanishes at the point; the unitary basis is undefined");
  nf.sign = nf.b > 0 ? 1 : -1;
  const double root = std::sqrt(std::abs(nf.b));
  const std::complex<double> I(0.0, 1.0);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(D), zz = Eigen::VectorXcd::Zero(D);
  w[coord::w1] = 1.0 / root;
  w[coord::w2] = -I / root;
  zz = w;
  zz[coord::z1] -= double(nf.sign) * root;
  zz[coord::z2] -= -I * double(nf.sign) * root;
  Eigen::MatrixXcd basis(D, 2);
  basis.col(0) = w;
  basis.col(1) = zz;
  const Eigen::MatrixXcd a = holonomy_generator(spec.n).cast<std::complex<double>>();
  const Eigen::MatrixXcd image = a * basis;
  nf.matrix = basis.colPivHouseholderQr().solve(image);
  nf.fit_residual = (basis * nf.matrix - image).cwiseAbs().maxCoeff();
  nf.rescaled = std::abs(nf.b) * nf.matrix;
  const Mat g = metric_components(spec, p).as_matrix();
  const Eigen::MatrixXcd gc = g.cast<std::complex<double>>();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) nf.hermitian_form(i, j) = basis.col(i).transpose() * gc * basis.col(j).conjugate();
  nf.trace = std::abs(nf.matrix.trace());
  nf.square = (nf.matrix * nf.matrix).cwiseAbs().maxCoeff();
  nf.su11_defect = (nf.matrix.adjoint() * nf.hermitian_form + nf.hermitian_form * nf.matrix).cwiseAbs().maxCoeff();
  return nf;
}

GeneratorChecks generator_checks(const MetricSpec& spec, const Point& p) {
  const Mat g = metric_components(spec, p).as_matrix();
  const Mat a = holonomy_generator(spec.n);
  const Mat j = standard_J(spec.n);
  GeneratorChecks c;
  c.skew = (g * a + a.transpose() * g).cwiseAbs().maxCoeff();
  c.commutes_J = (a * j - j * a).cwiseAbs().maxCoeff();
  c.nilpotent = (a * a).cwiseAbs().maxCoeff();
  return c;
}

}  // namespace pwlab
