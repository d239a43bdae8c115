#include "pwlab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace pwlab {

TensorValue::TensorValue(int dim, std::vector<Variance> variance)
    : dim_(dim), variance_(std::move(variance)) {
  size_t n = 1;
  for (size_t k = 0; k < variance_.size(); ++k) n *= size_t(dim_);
  data_.assign(n, 0.0);
}

TensorValue TensorValue::covariant(int dim, int rank) {
  return TensorValue(dim, std::vector<Variance>(size_t(rank), Variance::Lower));
}

TensorValue TensorValue::from_matrix(const Mat& m, Variance a, Variance b) {
  TensorValue t(int(m.rows()), {a, b});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return t;
}

Mat TensorValue::as_matrix() const {
  if (rank() != 2) throw std::logic_error("as_matrix needs a rank-2 tensor");
  Mat m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

TensorValue TensorValue::operator-(const TensorValue& o) const {
  if (o.dim_ != dim_ || o.variance_ != variance_) throw std::logic_error("tensor shape mismatch");
  TensorValue r = *this;
  for (size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
  return r;
}

namespace {

TensorValue contract_slot(const TensorValue& t, int slot, const Mat& m, Variance to) {
  if (slot < 0 || slot >= t.rank()) throw std::out_of_range("index slot");
  std::vector<Variance> var = t.variance();
  var[size_t(slot)] = to;
  TensorValue r(t.dim(), var);
  const int d = t.dim();
  size_t inner = 1;
  for (int k = slot + 1; k < t.rank(); ++k) inner *= size_t(d);
  const size_t outer = t.size() / (inner * size_t(d));
  const auto& src = t.data();
  auto& dst = r.data();
  for (size_t o = 0; o < outer; ++o)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double mij = m(i, j);
        if (mij == 0.0) continue;
        const double* s = &src[(o * d + size_t(j)) * inner];
        double* out = &dst[(o * d + size_t(i)) * inner];
        for (size_t in = 0; in < inner; ++in) out[in] += mij * s[in];
      }
  return r;
}

}  // namespace

TensorValue raise_index(const TensorValue& t, int slot, const Mat& ginv) {
  if (t.variance()[size_t(slot)] != Variance::Lower) throw std::logic_error("index already upper");
  return contract_slot(t, slot, ginv, Variance::Upper);
}

TensorValue lower_index(const TensorValue& t, int slot, const Mat& g) {
  if (t.variance()[size_t(slot)] != Variance::Upper) throw std::logic_error("index already lower");
  return contract_slot(t, slot, g, Variance::Lower);
}

void MetricJet::allocate(int d, int ord, std::vector<int> active_coords) {
  dim = d;
  order = ord;
  active = std::move(active_coords);
  slot_of.assign(size_t(d), -1);
  for (size_t a = 0; a < active.size(); ++a) slot_of[size_t(active[a])] = int(a);
  g = Mat::Zero(d, d);
  ginv = Mat::Zero(d, d);
  const size_t na = active.size();
  const size_t dd = size_t(d) * size_t(d);
  d1.assign(ord >= 1 ? na * dd : 0, 0.0);
  d2.assign(ord >= 2 ? na * na * dd : 0, 0.0);
  d3.assign(ord >= 3 ? na * na * na * dd : 0, 0.0);
}

}  // namespace pwlab
