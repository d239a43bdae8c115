#include "pwlab/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace pwlab {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  Rational q(x);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational");

  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }

  // decimal with optional exponent
  std::string mant = s;
  long exp10 = 0;
  const auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    try {
      exp10 = std::stol(s.substr(epos + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent: " + text);
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(mant.begin());
  }
  std::string digits;
  long frac = 0;
  bool seen_dot = false;
  for (char c : mant) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("bad rational: " + text);
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac;
    } else {
      throw std::invalid_argument("bad rational: " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad rational: " + text);
  mpz_class num(digits, 10);
  mpz_class ten = 10;
  const long shift = exp10 - frac;
  Rational q;
  if (shift >= 0) {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
    q = Rational(num * p);
  } else {
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-shift));
    q = Rational(num, p);
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

void RationalMatrix::append_row(const std::vector<Rational>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = int(row.size());
  if (int(row.size()) != cols_) throw std::invalid_argument("row length mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<int> RationalMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int piv = -1;
    for (int i = r; i < rows_; ++i)
      if (sgn((*this)(i, c)) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols_; ++j) std::swap((*this)(piv, j), (*this)(r, j));
    const Rational inv = 1 / (*this)(r, c);
    for (int j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || sgn((*this)(i, c)) == 0) continue;
      const Rational f = (*this)(i, c);
      for (int j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int RationalMatrix::rank() const {
  RationalMatrix m = *this;
  return int(m.rref().size());
}

std::vector<std::vector<Rational>> RationalMatrix::nullspace() const {
  RationalMatrix m = *this;
  const auto pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> out;
  for (int f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols_);
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(int(k), f);
    out.push_back(std::move(v));
  }
  return out;
}

RationalSubspace::RationalSubspace(int dim, const std::vector<std::vector<Rational>>& spanning)
    : dim_(dim) {
  RationalMatrix m(0, dim);
  for (const auto& v : spanning) m.append_row(v);
  const auto pivots = m.rref();
  for (size_t k = 0; k < pivots.size(); ++k) {
    std::vector<Rational> row(dim);
    for (int j = 0; j < dim; ++j) row[j] = m(int(k), j);
    basis_.push_back(std::move(row));
  }
}

bool RationalSubspace::contains(const std::vector<Rational>& v) const {
  std::vector<std::vector<Rational>> ext = basis_;
  ext.push_back(v);
  return RationalSubspace(dim_, ext).dim() == dim();
}

bool RationalSubspace::contains(const RationalSubspace& other) const {
  for (const auto& v : other.basis_)
    if (!contains(v)) return false;
  return true;
}

bool RationalSubspace::operator==(const RationalSubspace& other) const {
  return dim_ == other.dim_ && basis_ == other.basis_;
}

}  // namespace pwlab
