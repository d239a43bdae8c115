#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace pwlab {

using Rational = mpq_class;
using RVec = std::vector<Rational>;

// Exact conversion: every finite double is a dyadic rational.
Rational to_rational(double x);

// Parses "3", "-3/2", "0.25" or "1e-3" exactly (decimal strings are read as
// the decimal value, not its binary rounding).
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

// Dense row-major matrix over the rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  void append_row(const std::vector<Rational>& row);

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<int> rref();
  int rank() const;
  // Basis of {x : A x = 0}, one vector per free column.
  std::vector<std::vector<Rational>> nullspace() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

// Subspace of Q^dim stored as an RREF basis; equality is basis equality.
class RationalSubspace {
 public:
  explicit RationalSubspace(int dim) : dim_(dim) {}
  RationalSubspace(int dim, const std::vector<std::vector<Rational>>& spanning);

  int ambient_dim() const { return dim_; }
  int dim() const { return int(basis_.size()); }
  const std::vector<std::vector<Rational>>& basis() const { return basis_; }
  bool contains(const std::vector<Rational>& v) const;
  bool contains(const RationalSubspace& other) const;
  bool operator==(const RationalSubspace& other) const;

 private:
  int dim_;
  std::vector<std::vector<Rational>> basis_;
};

}  // namespace pwlab
