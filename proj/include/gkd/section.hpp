#pragma once
// Fourier sections of exterior-algebra bundles over the torus R^{2n} / 2pi Z^{2n}:
// finite sums  sum_k e^{i k.x} phi_k  with k in Z^{2n} and phi_k an exact fiber
// element.  Everything is a finite lattice-supported series; no truncation or
// rounding happens here.

#include <functional>
#include <map>
#include <vector>

#include "gkd/exterior.hpp"
#include "gkd/frames.hpp"

namespace gkd {

using Freq = std::vector<int>;  // length 2n

inline Freq freq_add(const Freq& a, const Freq& b) {
  Freq r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline Freq freq_neg(const Freq& a) {
  Freq r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}
inline long freq_norm2(const Freq& a) {
  long s = 0;
  for (int v : a) s += static_cast<long>(v) * v;
  return s;
}

struct XSec {
  int n = 0;
  std::map<Freq, ExtFiber> t;

  XSec() = default;
  explicit XSec(int n_) : n(n_) {}
  static XSec constant(const ExtFiber& f) {
    XSec s(f.n);
    if (!f.is_zero()) s.t.emplace(Freq(2 * f.n, 0), f);
    return s;
  }
  static XSec mono(const Freq& k, const ExtFiber& f) {
    XSec s(f.n);
    if (!f.is_zero()) s.t.emplace(k, f);
    return s;
  }

  bool is_zero() const { return t.empty(); }
  void add_term(const Freq& k, const ExtFiber& f) {
    if (f.is_zero()) return;
    auto it = t.find(k);
    if (it == t.end()) {
      t.emplace(k, f);
    } else {
      it->second += f;
      if (it->second.is_zero()) t.erase(it);
    }
  }
  ExtFiber coeff(const Freq& k) const {
    auto it = t.find(k);
    return it == t.end() ? ExtFiber(n) : it->second;
  }

  XSec& operator+=(const XSec& o) {
    assert(n == o.n || is_zero() || o.is_zero());
    if (n == 0) n = o.n;
    for (const auto& [k, f] : o.t) add_term(k, f);
    return *this;
  }
  XSec& operator-=(const XSec& o) {
    assert(n == o.n || is_zero() || o.is_zero());
    if (n == 0) n = o.n;
    for (const auto& [k, f] : o.t) add_term(k, -f);
    return *this;
  }
  friend XSec operator+(XSec a, const XSec& b) { return a += b; }
  friend XSec operator-(XSec a, const XSec& b) { return a -= b; }
  XSec operator-() const {
    XSec s(n);
    for (const auto& [k, f] : t) s.t.emplace(k, -f);
    return s;
  }
  friend XSec operator*(const Scalar& c, const XSec& x) {
    XSec s(x.n);
    if (c.is_zero()) return s;
    for (const auto& [k, f] : x.t) s.t.emplace(k, c * f);
    return s;
  }
  friend bool operator==(const XSec& a, const XSec& b) { return (a - b).is_zero(); }

  // complex conjugate section: conj(e^{ikx} phi) = e^{-ikx} conj(phi)
  XSec conj() const {
    XSec s(n);
    for (const auto& [k, f] : t) s.t.emplace(freq_neg(k), f.conj());
    return s;
  }
  bool is_real() const { return (*this - conj()).is_zero(); }

  // apply a frequency-aware fiber map (e.g. differential operators)
  XSec map_fibers(const std::function<ExtFiber(const Freq&, const ExtFiber&)>& f) const {
    XSec s(n);
    for (const auto& [k, fib] : t) s.add_term(k, f(k, fib));
    return s;
  }
};

// matrix-valued sections (endomorphism fields etc.)
struct MatSec {
  int n = 0;
  int rows = 0, cols = 0;
  std::map<Freq, Mat> t;

  MatSec() = default;
  MatSec(int n_, int r, int c) : n(n_), rows(r), cols(c) {}
  static MatSec constant(int n_, const Mat& m) {
    MatSec s(n_, m.rows, m.cols);
    if (!m.is_zero()) s.t.emplace(Freq(2 * n_, 0), m);
    return s;
  }
  bool is_zero() const {
    for (const auto& [k, m] : t)
      if (!m.is_zero()) return false;
    return true;
  }
  void add_term(const Freq& k, const Mat& m) {
    if (m.is_zero()) return;
    auto it = t.find(k);
    if (it == t.end()) {
      t.emplace(k, m);
    } else {
      it->second = it->second + m;
      if (it->second.is_zero()) t.erase(it);
    }
  }
  MatSec& operator+=(const MatSec& o) {
    for (const auto& [k, m] : o.t) add_term(k, m);
    if (rows == 0) { n = o.n; rows = o.rows; cols = o.cols; }
    return *this;
  }
  friend MatSec operator+(MatSec a, const MatSec& b) { return a += b; }
  friend MatSec operator-(const MatSec& a, const MatSec& b) {
    MatSec r = a;
    for (const auto& [k, m] : b.t) r.add_term(k, Scalar(-1) * m);
    return r;
  }
  friend bool operator==(const MatSec& a, const MatSec& b) { return (a - b).is_zero(); }
  friend MatSec operator*(const Scalar& s, const MatSec& m) {
    MatSec r(m.n, m.rows, m.cols);
    if (s.is_zero()) return r;
    for (const auto& [k, v] : m.t) r.t.emplace(k, s * v);
    return r;
  }
  MatSec conj() const {
    MatSec s(n, rows, cols);
    for (const auto& [k, m] : t) s.t.emplace(freq_neg(k), m.conj());
    return s;
  }
};

// ---- convolution kernels (serial reference + OpenMP) ---------------------------
using FiberBinOp = std::function<ExtFiber(const ExtFiber&, const ExtFiber&)>;
using FiberBinOpK = std::function<ExtFiber(const Freq&, const ExtFiber&, const Freq&,
                                           const ExtFiber&)>;

// sum over term pairs of op(a_j, b_l) at frequency k_j + k_l; deterministic
// (in-group summation order fixed independent of thread count)
XSec convolve(const XSec& a, const XSec& b, const FiberBinOp& op);
// frequency-aware variant (for operators whose fiber action depends on k)
XSec convolve_freq(const XSec& a, const XSec& b, const FiberBinOpK& op);

// matrix-section product, same kernel structure
MatSec convolve_mat(const MatSec& a, const MatSec& b);

// pointwise wedge of sections
inline XSec swedge(const XSec& a, const XSec& b) {
  return convolve(a, b, [](const ExtFiber& x, const ExtFiber& y) { return wedge(x, y); });
}

// action of a CL2-carrier section on a form section (quantized degree-2 action)
ExtFiber cl2_apply_fiber(const ExtFiber& W, const ExtFiber& phi);
inline XSec cl2_apply(const XSec& W, const XSec& phi) {
  return convolve(W, phi, [](const ExtFiber& w, const ExtFiber& p) {
    return cl2_apply_fiber(w, p);
  });
}

// action of a degree-one section
inline XSec spin1_apply(const XSec& u, const XSec& phi) {
  return convolve(u, phi, [](const ExtFiber& w, const ExtFiber& p) {
    return spin1(w, p);
  });
}

}  // namespace gkd
