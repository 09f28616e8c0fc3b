#pragma once
// Dense exact linear algebra over the Gaussian rationals.
// Everything is Gauss-Jordan based; solutions are deterministic (RREF particular
// solution = free variables set to zero), which keeps every downstream artifact
// byte-reproducible.

#include <cassert>
#include <optional>
#include <vector>

#include "gkd/scalar.hpp"

namespace gkd {

using Vec = std::vector<Scalar>;

struct Mat {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;  // row major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Scalar& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Scalar& operator()(int r, int c) const {
    return a[static_cast<size_t>(r) * cols + c];
  }

  static Mat id(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  bool is_zero() const {
    for (const auto& x : a)
      if (!x.is_zero()) return false;
    return true;
  }

  Mat transpose() const {
    Mat m(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(c, r) = (*this)(r, c);
    return m;
  }
  Mat conj_transpose() const {
    Mat m(cols, rows);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(c, r) = (*this)(r, c).conj();
    return m;
  }
  Mat conj() const {
    Mat m(rows, cols);
    for (size_t i = 0; i < a.size(); ++i) m.a[i] = a[i].conj();
    return m;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] + y.a[i];
    return m;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = x.a[i] - y.a[i];
    return m;
  }
  friend Mat operator*(const Scalar& s, const Mat& x) {
    Mat m(x.rows, x.cols);
    for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = s * x.a[i];
    return m;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat m(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
      for (int k = 0; k < x.cols; ++k) {
        const Scalar& xv = x(r, k);
        if (xv.is_zero()) continue;
        for (int c = 0; c < y.cols; ++c) {
          if (!y(k, c).is_zero()) m(r, c) += xv * y(k, c);
        }
      }
    return m;
  }
  friend Vec operator*(const Mat& x, const Vec& v) {
    assert(static_cast<size_t>(x.cols) == v.size());
    Vec out(x.rows);
    for (int r = 0; r < x.rows; ++r)
      for (int c = 0; c < x.cols; ++c)
        if (!x(r, c).is_zero() && !v[c].is_zero()) out[r] += x(r, c) * v[c];
    return out;
  }
  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

// In-place reduced row echelon form. Returns pivot columns. If `rhs` is
// non-null the same row operations are applied to it (augmented system).
inline std::vector<int> rref(Mat& m, Mat* rhs = nullptr) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int r = row; r < m.rows; ++r)
      if (!m(r, col).is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m(sel, c), m(row, c));
      if (rhs)
        for (int c = 0; c < rhs->cols; ++c) std::swap((*rhs)(sel, c), (*rhs)(row, c));
    }
    Scalar inv = Scalar(1) / m(row, col);
    for (int c = col; c < m.cols; ++c) m(row, c) *= inv;
    if (rhs)
      for (int c = 0; c < rhs->cols; ++c) (*rhs)(row, c) *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      Scalar f = m(r, col);
      for (int c = col; c < m.cols; ++c) m(r, c) -= f * m(row, c);
      if (rhs)
        for (int c = 0; c < rhs->cols; ++c) (*rhs)(r, c) -= f * (*rhs)(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(Mat m) { return static_cast<int>(rref(m).size()); }

// Basis of the right kernel, one column vector per free variable.
inline std::vector<Vec> kernel_basis(Mat m) {
  std::vector<int> piv = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<Vec> basis;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_piv[fc]) continue;
    Vec v(m.cols);
    v[fc] = Scalar(1);
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(static_cast<int>(i), fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct SolveResult {
  bool ok = false;
  Vec x;  // RREF particular solution (free variables zero) when ok
};

// Solve A x = b exactly; deterministic particular solution.
inline SolveResult solve(Mat A, Vec b) {
  assert(static_cast<size_t>(A.rows) == b.size());
  Mat rhs(A.rows, 1);
  for (int r = 0; r < A.rows; ++r) rhs(r, 0) = b[r];
  std::vector<int> piv = rref(A, &rhs);
  // consistency: rows with zero A part must have zero rhs
  for (int r = static_cast<int>(piv.size()); r < A.rows; ++r)
    if (!rhs(r, 0).is_zero()) return {};
  SolveResult res;
  res.ok = true;
  res.x.assign(A.cols, Scalar());
  for (size_t i = 0; i < piv.size(); ++i) res.x[piv[i]] = rhs(static_cast<int>(i), 0);
  return res;
}

inline std::optional<Mat> inverse(Mat m) {
  assert(m.rows == m.cols);
  Mat rhs = Mat::id(m.rows);
  std::vector<int> piv = rref(m, &rhs);
  if (static_cast<int>(piv.size()) != m.rows) return std::nullopt;
  return rhs;
}

inline Scalar det(Mat m) {
  assert(m.rows == m.cols);
  Scalar d(1);
  int n = m.rows;
  for (int col = 0, row = 0; col < n && row < n; ++col, ++row) {
    int sel = -1;
    for (int r = row; r < n; ++r)
      if (!m(r, col).is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) return Scalar(0);
    if (sel != row) {
      for (int c = 0; c < n; ++c) std::swap(m(sel, c), m(row, c));
      d = -d;
    }
    d *= m(row, col);
    Scalar inv = Scalar(1) / m(row, col);
    for (int r = row + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      Scalar f = m(r, col) * inv;
      for (int c = col; c < n; ++c) m(r, c) -= f * m(row, c);
    }
  }
  return d;
}

// Leading principal minors (for exact positivity checks of Hermitian forms).
inline std::vector<Scalar> leading_minors(const Mat& m) {
  assert(m.rows == m.cols);
  std::vector<Scalar> out;
  for (int k = 1; k <= m.rows; ++k) {
    Mat sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = m(r, c);
    out.push_back(det(sub));
  }
  return out;
}

// Reusable factorization for solving A x = b for many right-hand sides with the
// same A: stores T with T*A in RREF, plus the pivot columns.
struct Factor {
  Mat T;  // row-operation transform
  Mat R;  // RREF of A
  std::vector<int> pivots;
  int rows = 0, cols = 0;

  explicit Factor(Mat A) : rows(A.rows), cols(A.cols) {
    T = Mat::id(A.rows);
    pivots = rref(A, &T);
    R = std::move(A);
  }
  int rank() const { return static_cast<int>(pivots.size()); }

  SolveResult solve(const Vec& b) const {
    assert(static_cast<size_t>(rows) == b.size());
    Vec r = T * b;
    for (int i = rank(); i < rows; ++i)
      if (!r[i].is_zero()) return {};
    // full solution needs free-variable back-substitution only when A has
    // free columns; particular solution sets them to zero.
    SolveResult res;
    res.ok = true;
    res.x.assign(cols, Scalar());
    for (int i = 0; i < rank(); ++i) res.x[pivots[i]] = r[i];
    return res;
  }
};

}  // namespace gkd
