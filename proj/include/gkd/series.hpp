#pragma once
// Truncated multivariable power series with coefficients in an additive value
// type (Fourier sections, matrices, ...).  A series in m variables truncated
// at total degree N stores only its nonzero coefficients, indexed by
// multi-degree; all arithmetic truncates at total degree N.
//
// Deformation series are stored with PLAIN Taylor coefficients: the entry at
// multi-degree nu is the coefficient of t^nu in the sum, i.e. eps_nu / nu!
// for a series written with divided powers.  All identities in the solver and
// the reports are phrased for these plain coefficients.
//
// Coefficient type requirements: default-constructible only via the provided
// zero prototype, operator+=, unary minus via Scalar(-1) scaling or
// operator-, is_zero(), and Scalar * C for evaluation/scaling.

#include <cassert>
#include <functional>
#include <map>
#include <vector>

#include "gkd/scalar.hpp"

namespace gkd {

using MIdx = std::vector<int>;  // multi-degree; length = number of variables

inline int midx_total(const MIdx& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

inline MIdx midx_add(const MIdx& a, const MIdx& b) {
  assert(a.size() == b.size());
  MIdx r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// Enumerate all multi-indices of length m with total degree exactly `total`,
// in lexicographic order.
inline void for_each_midx(int m, int total,
                          const std::function<void(const MIdx&)>& fn) {
  MIdx nu(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      nu[pos] = left;
      fn(nu);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      nu[pos] = d;
      rec(pos + 1, left - d);
    }
  };
  if (m == 0) return;
  rec(0, total);
}

template <class C>
class TSeries {
 public:
  TSeries() = default;
  TSeries(C zero, int m, int N) : zero_(std::move(zero)), m_(m), N_(N) {}

  int vars() const { return m_; }
  int trunc() const { return N_; }
  const C& zero() const { return zero_; }

  const C& coeff(const MIdx& nu) const {
    auto it = c_.find(nu);
    return it == c_.end() ? zero_ : it->second;
  }
  // single-variable convenience
  const C& coeff1(int k) const { return coeff(MIdx{k}); }

  void set(const MIdx& nu, C val) {
    assert(static_cast<int>(nu.size()) == m_);
    if (midx_total(nu) > N_) return;
    if (val.is_zero())
      c_.erase(nu);
    else
      c_[nu] = std::move(val);
  }
  void add(const MIdx& nu, const C& val) {
    assert(static_cast<int>(nu.size()) == m_);
    if (midx_total(nu) > N_ || val.is_zero()) return;
    auto it = c_.find(nu);
    if (it == c_.end()) {
      c_.emplace(nu, val);
    } else {
      it->second += val;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  const std::map<MIdx, C>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  TSeries& operator+=(const TSeries& o) {
    for (const auto& [nu, v] : o.c_) add(nu, v);
    return *this;
  }
  friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
  friend TSeries operator-(const TSeries& a, const TSeries& b) {
    TSeries r = a;
    for (const auto& [nu, v] : b.c_) r.add(nu, Scalar(-1) * v);
    return r;
  }
  friend TSeries operator*(const Scalar& s, const TSeries& a) {
    TSeries r(a.zero_, a.m_, a.N_);
    if (s.is_zero()) return r;
    for (const auto& [nu, v] : a.c_) r.set(nu, s * v);
    return r;
  }
  friend bool operator==(const TSeries& a, const TSeries& b) {
    return (a - b).is_zero();
  }

  // Truncated bilinear combination: sum over mu + rho (total <= N) of
  // f(a_mu, b_rho) at multi-degree mu + rho.
  template <class F>
  static TSeries combine(const TSeries& a, const TSeries& b, F&& f) {
    TSeries r(a.zero_, a.m_, std::min(a.N_, b.N_));
    for (const auto& [mu, x] : a.c_)
      for (const auto& [rho, y] : b.c_) {
        if (midx_total(mu) + midx_total(rho) > r.N_) continue;
        r.add(midx_add(mu, rho), f(x, y));
      }
    return r;
  }

  // Map every coefficient through g (degree-preserving).
  template <class G>
  TSeries map(G&& g) const {
    TSeries r(zero_, m_, N_);
    for (const auto& [nu, v] : c_) r.set(nu, g(v));
    return r;
  }

  // Evaluate at a rational point t (length m).
  C eval(const std::vector<Scalar>& t) const {
    assert(static_cast<int>(t.size()) == m_);
    C r = zero_;
    for (const auto& [nu, v] : c_) {
      Scalar w(1);
      for (int i = 0; i < m_; ++i)
        for (int p = 0; p < nu[i]; ++p) w = w * t[i];
      r += w * v;
    }
    return r;
  }

  // Restrict to the line t = dir * s: a one-variable series in s.
  TSeries restrict_line(const std::vector<Scalar>& dir) const {
    assert(static_cast<int>(dir.size()) == m_);
    TSeries r(zero_, 1, N_);
    for (const auto& [nu, v] : c_) {
      Scalar w(1);
      for (int i = 0; i < m_; ++i)
        for (int p = 0; p < nu[i]; ++p) w = w * dir[i];
      r.add(MIdx{midx_total(nu)}, w * v);
    }
    return r;
  }

 private:
  C zero_{};
  int m_ = 0;
  int N_ = 0;
  std::map<MIdx, C> c_;
};

// exp of a series with zero constant term, under the product `mul`:
//   one + s + s*s/2! + ... truncated at s.trunc().
template <class C, class F>
TSeries<C> series_exp(const TSeries<C>& s, const C& one, F&& mul) {
  assert(s.coeff(MIdx(s.vars(), 0)).is_zero() &&
         "exp requires zero constant term");
  TSeries<C> r(s.zero(), s.vars(), s.trunc());
  r.set(MIdx(s.vars(), 0), one);
  TSeries<C> pw = r;  // s^j / j!
  mpq_class fact = 1;
  for (int j = 1; j <= s.trunc(); ++j) {
    pw = TSeries<C>::combine(pw, s, mul);
    fact *= j;
    r += Scalar(mpq_class(1) / fact) * pw;
    if (pw.is_zero()) break;
  }
  return r;
}

}  // namespace gkd
