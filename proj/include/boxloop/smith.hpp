#pragma once

// Exact integer matrices and Smith normal form with unimodular transforms.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boxloop/errors.hpp"

namespace boxloop {

using Integer = boost::multiprecision::cpp_int;

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntegerMatrix(std::size_t rows, std::size_t cols, const std::vector<long long>& values) : IntegerMatrix(rows, cols) {
    if (values.size() != rows * cols) throw InputError("matrix data size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) data_[i] = values[i];
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntegerMatrix operator*(const IntegerMatrix& o) const {
    if (cols_ != o.rows_) throw InputError("matrix dimensions do not match");
    IntegerMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Integer& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }

  bool operator==(const IntegerMatrix& o) const = default;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntegerMatrix m) {
  if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      m.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithForm {
  IntegerMatrix u, s, v;           // u * m * v == s
  std::vector<Integer> diagonal;   // nonzero invariant factors d1 | d2 | ...

  std::size_t rank() const { return diagonal.size(); }
};

namespace detail {

/// In-place diagonalisation; `u`/`v` may be null when transforms are not
/// needed. Returns the nonzero diagonal.
inline std::vector<Integer> smith_in_place(IntegerMatrix& s, IntegerMatrix* u, IntegerMatrix* v) {
  using boost::multiprecision::abs;
  const std::size_t rows = s.rows(), cols = s.cols();
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    auto find_min = [&](std::size_t& pr, std::size_t& pc) {
      bool found = false;
      Integer best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (s(i, j) != 0 && (!found || abs(s(i, j)) < best)) {
            best = abs(s(i, j));
            pr = i;
            pc = j;
            found = true;
            if (best == 1) return true;
          }
      return found;
    };
    std::size_t pr = 0, pc = 0;
    if (!find_min(pr, pc)) break;
    for (;;) {
      s.swap_rows(t, pr);
      if (u) u->swap_rows(t, pr);
      s.swap_cols(t, pc);
      if (v) v->swap_cols(t, pc);
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (s(i, t) == 0) continue;
        Integer q = s(i, t) / s(t, t);
        s.add_row(i, t, -q);
        if (u) u->add_row(i, t, -q);
        if (s(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (s(t, j) == 0) continue;
        Integer q = s(t, j) / s(t, t);
        s.add_col(j, t, -q);
        if (v) v->add_col(j, t, -q);
        if (s(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // A remainder is smaller than the pivot; bring the smallest in.
        Integer best = abs(s(t, t));
        pr = t;
        pc = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (s(i, t) != 0 && abs(s(i, t)) < best) {
            best = abs(s(i, t));
            pr = i;
            pc = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (s(t, j) != 0 && abs(s(t, j)) < best) {
            best = abs(s(t, j));
            pr = t;
            pc = j;
          }
        continue;
      }
      // Divisibility: fold a row with a non-multiple into the pivot row.
      bool fixed = true;
      for (std::size_t i = t + 1; i < rows && fixed; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (s(i, j) % s(t, t) != 0) {
            s.add_row(t, i, 1);
            if (u) u->add_row(t, i, 1);
            fixed = false;
            break;
          }
      if (fixed) break;
      pr = t;
      pc = t;
    }
    if (s(t, t) < 0) {
      s.negate_row(t);
      if (u) u->negate_row(t);
    }
  }
  std::vector<Integer> diag;
  for (std::size_t i = 0; i < t; ++i) diag.push_back(s(i, i));
  return diag;
}

}  // namespace detail

/// U * M * V = S with S diagonal, d1 | d2 | ..., U and V unimodular.
inline SmithForm smith_normal_form(const IntegerMatrix& m) {
  SmithForm f{IntegerMatrix::identity(m.rows()), m, IntegerMatrix::identity(m.cols()), {}};
  f.diagonal = detail::smith_in_place(f.s, &f.u, &f.v);
  return f;
}

/// Nonzero invariant factors only (no transforms).
inline std::vector<Integer> invariant_factors(IntegerMatrix m) { return detail::smith_in_place(m, nullptr, nullptr); }

/// Checks every Smith normal form postcondition.
inline bool verify_smith(const IntegerMatrix& m, const SmithForm& f, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (f.u * m * f.v != f.s) return fail("U*M*V != S");
  auto du = determinant(f.u), dv = determinant(f.v);
  if (boost::multiprecision::abs(du) != 1 || boost::multiprecision::abs(dv) != 1) return fail("transform not unimodular");
  for (std::size_t i = 0; i < f.s.rows(); ++i)
    for (std::size_t j = 0; j < f.s.cols(); ++j)
      if (i != j && f.s(i, j) != 0) return fail("S not diagonal");
  const std::size_t r = f.diagonal.size();
  for (std::size_t i = 0; i < std::min(f.s.rows(), f.s.cols()); ++i) {
    if (i < r && (f.s(i, i) <= 0 || f.s(i, i) != f.diagonal[i])) return fail("bad diagonal entry");
    if (i >= r && f.s(i, i) != 0) return fail("nonzero entry past the rank");
  }
  for (std::size_t i = 1; i < r; ++i)
    if (f.diagonal[i] % f.diagonal[i - 1] != 0) return fail("divisibility chain broken");
  return true;
}

}  // namespace boxloop
