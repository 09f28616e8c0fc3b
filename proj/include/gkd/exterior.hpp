#pragma once
// Exterior algebra of W = (T + T*) (x) C over a point of a 2n-torus, in the real
// coordinate frame.  Generators are indexed 0..4n-1:
//   g in [0, 2n)   : the coordinate vector field  d/dx^{g+1}
//   g in [2n, 4n)  : the coordinate one-form      dx^{g-2n+1}
// A basis word is a bitmask over generators, letters taken in ascending index
// order.  Coefficients are exact Gaussian rationals.
//
// The canonical pairing used throughout is
//   <X + xi, Y + eta> = (xi(Y) + eta(X)) / 2,
// so <d/dx^k + dx^k, d/dx^k + dx^k> = 1, and the spin (Clifford) action of a
// degree-one element X + xi on a form is  iota_X + xi wedge .

#include <cassert>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gkd/linalg.hpp"
#include "gkd/scalar.hpp"

namespace gkd {

using Word = std::uint32_t;

inline int word_deg(Word w) { return __builtin_popcount(w); }

// Sign of merging two disjoint ascending words into one ascending word.
inline int merge_sign(Word a, Word b) {
  int inv = 0;
  for (Word t = b; t; t &= t - 1) {
    int j = __builtin_ctz(t);
    inv += __builtin_popcount(a >> (j + 1));
  }
  return (inv & 1) ? -1 : 1;
}

// Swap the vector and covector parts of a real word.
inline Word dual_word(Word w, int n) {
  Word lo = w & ((Word(1) << (2 * n)) - 1);
  Word hi = w >> (2 * n);
  return (lo << (2 * n)) | hi;
}

// 2 * <e_i, e_j> for real generators (1 exactly when {i,j} pairs d/dx^k with dx^k).
inline int pair2_gen(int n, int i, int j) {
  return (i + 2 * n == j || j + 2 * n == i) ? 1 : 0;
}

struct ExtFiber {
  int n = 0;
  std::map<Word, Scalar> c;

  ExtFiber() = default;
  explicit ExtFiber(int n_) : n(n_) {}

  static ExtFiber unit(int n_) {
    ExtFiber f(n_);
    f.c[0] = Scalar(1);
    return f;
  }
  static ExtFiber term(int n_, Word w, Scalar s) {
    ExtFiber f(n_);
    if (!s.is_zero()) f.c[w] = std::move(s);
    return f;
  }
  // single generators
  static ExtFiber vec(int n_, int k) { return term(n_, Word(1) << k, Scalar(1)); }
  static ExtFiber form(int n_, int k) {
    return term(n_, Word(1) << (2 * n_ + k), Scalar(1));
  }

  bool is_zero() const { return c.empty(); }

  void add_term(Word w, const Scalar& s) {
    if (s.is_zero()) return;
    auto it = c.find(w);
    if (it == c.end()) {
      c.emplace(w, s);
    } else {
      it->second += s;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  ExtFiber& operator+=(const ExtFiber& o) {
    assert(n == o.n || is_zero() || o.is_zero());
    if (n == 0) n = o.n;
    for (const auto& [w, s] : o.c) add_term(w, s);
    return *this;
  }
  ExtFiber& operator-=(const ExtFiber& o) {
    assert(n == o.n || is_zero() || o.is_zero());
    if (n == 0) n = o.n;
    for (const auto& [w, s] : o.c) add_term(w, -s);
    return *this;
  }
  friend ExtFiber operator+(ExtFiber a, const ExtFiber& b) { return a += b; }
  friend ExtFiber operator-(ExtFiber a, const ExtFiber& b) { return a -= b; }
  ExtFiber operator-() const {
    ExtFiber f(n);
    for (const auto& [w, s] : c) f.c[w] = -s;
    return f;
  }
  friend ExtFiber operator*(const Scalar& s, const ExtFiber& x) {
    ExtFiber f(x.n);
    if (s.is_zero()) return f;
    for (const auto& [w, v] : x.c) f.c[w] = s * v;
    return f;
  }
  friend bool operator==(const ExtFiber& a, const ExtFiber& b) {
    return (a - b).is_zero();
  }

  ExtFiber conj() const {  // complex conjugation (real basis words are fixed)
    ExtFiber f(n);
    for (const auto& [w, s] : c) f.c[w] = s.conj();
    return f;
  }

  Scalar coeff(Word w) const {
    auto it = c.find(w);
    return it == c.end() ? Scalar() : it->second;
  }

  int min_deg() const {
    int d = 1 << 30;
    for (const auto& [w, s] : c) {
      (void)s;
      d = std::min(d, word_deg(w));
    }
    return c.empty() ? 0 : d;
  }
  int max_deg() const {
    int d = 0;
    for (const auto& [w, s] : c) {
      (void)s;
      d = std::max(d, word_deg(w));
    }
    return d;
  }
  bool is_homogeneous(int p) const {
    for (const auto& [w, s] : c) {
      (void)s;
      if (word_deg(w) != p) return false;
    }
    return true;
  }
  ExtFiber part(int p) const {
    ExtFiber f(n);
    for (const auto& [w, s] : c)
      if (word_deg(w) == p) f.c[w] = s;
    return f;
  }
  // true if every word uses only covector generators (a differential form)
  bool is_form() const {
    Word vec_mask = (Word(1) << (2 * n)) - 1;
    for (const auto& [w, s] : c) {
      (void)s;
      if (w & vec_mask) return false;
    }
    return true;
  }
};

inline ExtFiber wedge(const ExtFiber& x, const ExtFiber& y) {
  assert(x.n == y.n || x.is_zero() || y.is_zero());
  ExtFiber out(x.n ? x.n : y.n);
  for (const auto& [wa, sa] : x.c)
    for (const auto& [wb, sb] : y.c) {
      if (wa & wb) continue;
      Scalar v = sa * sb;
      if (merge_sign(wa, wb) < 0) v = -v;
      out.add_term(wa | wb, v);
    }
  return out;
}

// Determinant extension of 2<.,.> to words: <e_S, e_T>_ext = det[2<s_i, t_j>].
// On real words this is nonzero only when T is the dual word of S, with a
// permutation sign.  Symmetric, bilinear, degree-diagonal.
inline Scalar ext_pair(const ExtFiber& x, const ExtFiber& y) {
  assert(x.n == y.n || x.is_zero() || y.is_zero());
  int n = x.n ? x.n : y.n;
  Scalar acc;
  for (const auto& [wa, sa] : x.c) {
    Word wt = dual_word(wa, n);
    auto it = y.c.find(wt);
    if (it == y.c.end()) continue;
    // positions of dual(s_i) within ascending T give a permutation; its sign
    // is the determinant of the letter-pairing matrix.
    int inv = 0;
    std::vector<int> pos;
    for (Word t = wa; t; t &= t - 1) {
      int g = __builtin_ctz(t);
      int dg = (g < 2 * n) ? g + 2 * n : g - 2 * n;
      int rank = __builtin_popcount(wt & ((Word(1) << dg) - 1));
      for (int p : pos)
        if (p > rank) ++inv;
      pos.push_back(rank);
    }
    Scalar v = sa * it->second;
    acc += (inv & 1) ? -v : v;
  }
  return acc;
}

// <u, v> for degree-one elements (half the ext pairing by the 2x convention).
inline Scalar pair1(const ExtFiber& u, const ExtFiber& v) {
  return Scalar::rat(1, 2) * ext_pair(u, v);
}

// Interior product by the coordinate vector d/dx^{k+1} (Koszul signs count all
// letters of the word, so this is the standard contraction on forms).
inline ExtFiber interior_gen(int k, const ExtFiber& phi) {
  ExtFiber out(phi.n);
  Word g = Word(1) << (2 * phi.n + k);
  for (const auto& [w, s] : phi.c) {
    if (!(w & g)) continue;
    int before = __builtin_popcount(w & (g - 1));
    out.add_term(w & ~g, (before & 1) ? -s : s);
  }
  return out;
}

// Spin (Clifford) action of a degree-one element u = X + xi on a form phi:
// iota_X phi + xi wedge phi.
inline ExtFiber spin1(const ExtFiber& u, const ExtFiber& phi) {
  assert(u.is_homogeneous(1));
  ExtFiber out(phi.n);
  for (const auto& [w, s] : u.c) {
    int g = __builtin_ctz(w);
    if (g < 2 * u.n) {
      out += s * interior_gen(g, phi);
    } else {
      out += s * wedge(ExtFiber::term(u.n, w, Scalar(1)), phi);
    }
  }
  return out;
}

inline std::string word_str(Word w, int n) {
  std::string s;
  for (Word t = w; t; t &= t - 1) {
    int g = __builtin_ctz(t);
    if (!s.empty()) s += "^";
    if (g < 2 * n)
      s += "e" + std::to_string(g + 1);
    else
      s += "dx" + std::to_string(g - 2 * n + 1);
  }
  return s.empty() ? "1" : s;
}

inline std::string fiber_str(const ExtFiber& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [w, v] : f.c) {
    if (!s.empty()) s += " + ";
    s += "(" + v.str() + ")" + word_str(w, f.n);
  }
  return s;
}

}  // namespace gkd
