#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

enum class Variance { Upper, Lower };

// Dense components over a coordinate basis, index order as declared by
// `variance`. Storage is row-major in the index order.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int dim, std::vector<Variance> variance);

  static TensorValue covariant(int dim, int rank);
  static TensorValue from_matrix(const Mat& m, Variance a, Variance b);

  int dim() const { return dim_; }
  int rank() const { return int(variance_.size()); }
  const std::vector<Variance>& variance() const { return variance_; }
  size_t size() const { return data_.size(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset({int(idx)...})];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset({int(idx)...})];
  }

  Mat as_matrix() const;
  double max_abs() const;
  TensorValue operator-(const TensorValue& o) const;

 private:
  size_t offset(std::initializer_list<int> idx) const {
    size_t off = 0;
    for (int i : idx) off = off * size_t(dim_) + size_t(i);
    return off;
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  std::vector<double> data_;
};

// Raise (with g^{-1}) or lower (with g) the index in `slot`.
TensorValue raise_index(const TensorValue& t, int slot, const Mat& ginv);
TensorValue lower_index(const TensorValue& t, int slot, const Mat& g);

// Metric value and partial derivatives up to `order` at one point.
// Derivatives are stored only for the "active" coordinates, the ones the
// components can depend on; all other partials are identically zero.
struct MetricJet {
  int dim = 0;
  int order = 0;
  std::vector<int> active;     // coordinate index of each active slot
  std::vector<int> slot_of;    // coordinate -> active slot or -1
  Mat g;
  Mat ginv;
  std::vector<double> d1;  // [a][i][j]
  std::vector<double> d2;  // [a][b][i][j]
  std::vector<double> d3;  // [a][b][c][i][j]

  void allocate(int dim, int order, std::vector<int> active_coords);
  int na() const { return int(active.size()); }

  double& dg(int a, int i, int j) { return d1[(size_t(a) * dim + i) * dim + j]; }
  double dg(int a, int i, int j) const { return d1[(size_t(a) * dim + i) * dim + j]; }
  double& ddg(int a, int b, int i, int j) {
    return d2[((size_t(a) * na() + b) * dim + i) * dim + j];
  }
  double ddg(int a, int b, int i, int j) const {
    return d2[((size_t(a) * na() + b) * dim + i) * dim + j];
  }
  double& dddg(int a, int b, int c, int i, int j) {
    return d3[(((size_t(a) * na() + b) * na() + c) * dim + i) * dim + j];
  }
  double dddg(int a, int b, int c, int i, int j) const {
    return d3[(((size_t(a) * na() + b) * na() + c) * dim + i) * dim + j];
  }
};

// A metric on an open coordinate domain.
class MetricModel {
 public:
  virtual ~MetricModel() = default;
  virtual int dim() const = 0;
  // Metric and derivatives up to `order` (0..3). Throws DomainError off-domain.
  virtual MetricJet jet(const Point& p, int order) const = 0;
  // Distance-like measure to the singular set; +inf when there is none.
  virtual double singular_distance(const Point& p) const = 0;
  // Bound on |d/dt singular_distance| when moving with velocity v.
  virtual double singular_approach_rate(const Point& p, const Vec& v) const = 0;
  virtual std::vector<std::string> coordinate_names() const = 0;
};

}  // namespace pwlab
