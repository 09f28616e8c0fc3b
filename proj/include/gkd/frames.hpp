#pragma once
// Complex frames of W = (T + T*) (x) C for the standard complex structure on a
// 2n-torus (z_j = x^{2j-1} + i x^{2j}), plus word expansion / coefficient
// extraction machinery.
//
// Eigenbundle conventions (fixed once for the whole engine):
//   L    = +i eigenbundle of the complex-structure J-operator
//        = span{ d/dzbar_j , dz_j }        (annihilator of Omega = dz_1^...^dz_n)
//   Lbar = span{ d/dz_j    , dzbar_j }     (deformation parameters live in ^2 Lbar)
//
// A Frame is a list of 2m degree-one letters together with dual letters
// normalized by 2<letter_i, dual_j> = delta_ij; coefficients of any element of
// the span of the frame's words are recovered with the determinant pairing.

#include <cassert>
#include <map>
#include <vector>

#include "gkd/exterior.hpp"

namespace gkd {

// ---- degree-one complex frame elements (j is 0-based) ----------------------
inline ExtFiber del_z(int n, int j) {  // d/dz_j = (d/dx^{2j+1} - i d/dx^{2j+2})/2
  ExtFiber f(n);
  f.add_term(Word(1) << (2 * j), Scalar::rat(1, 2));
  f.add_term(Word(1) << (2 * j + 1), Scalar::gauss(0, 1, -1, 2));
  return f;
}
inline ExtFiber del_zbar(int n, int j) {
  ExtFiber f(n);
  f.add_term(Word(1) << (2 * j), Scalar::rat(1, 2));
  f.add_term(Word(1) << (2 * j + 1), Scalar::gauss(0, 1, 1, 2));
  return f;
}
inline ExtFiber dz(int n, int j) {  // dz_j = dx^{2j+1} + i dx^{2j+2}
  ExtFiber f(n);
  f.add_term(Word(1) << (2 * n + 2 * j), Scalar(1));
  f.add_term(Word(1) << (2 * n + 2 * j + 1), Scalar::I());
  return f;
}
inline ExtFiber dzbar(int n, int j) {
  ExtFiber f(n);
  f.add_term(Word(1) << (2 * n + 2 * j), Scalar(1));
  f.add_term(Word(1) << (2 * n + 2 * j + 1), -Scalar::I());
  return f;
}

// ---- frames -----------------------------------------------------------------
struct Frame {
  int n = 0;       // torus half-dimension (generator space is 4n wide)
  int m2 = 0;      // number of letters
  std::vector<ExtFiber> letters, duals;
  std::vector<ExtFiber> word_exp, dual_word_exp;  // indexed by letter mask

  Frame() = default;
  Frame(int n_, std::vector<ExtFiber> ls, std::vector<ExtFiber> ds)
      : n(n_), m2(static_cast<int>(ls.size())), letters(std::move(ls)),
        duals(std::move(ds)) {
    assert(duals.size() == letters.size());
    size_t total = size_t(1) << m2;
    word_exp.resize(total);
    dual_word_exp.resize(total);
    for (size_t mask = 0; mask < total; ++mask) {
      ExtFiber w = ExtFiber::unit(n), dw = ExtFiber::unit(n);
      for (int i = 0; i < m2; ++i) {
        if (!(mask >> i & 1)) continue;
        w = wedge(w, letters[i]);
        dw = wedge(dw, duals[i]);  // dual letters in the same order as the word
      }
      word_exp[mask] = std::move(w);
      dual_word_exp[mask] = std::move(dw);
    }
  }

  // coefficient of the frame word `mask` in mu (mu must lie in the span of the
  // frame's words for the full list of coefficients to reconstruct it)
  Scalar coeff(const ExtFiber& mu, Word mask) const {
    return ext_pair(dual_word_exp[mask], mu);
  }

  // all coefficients, degree by degree (words over 2m letters)
  std::map<Word, Scalar> coeffs(const ExtFiber& mu) const {
    std::map<Word, Scalar> out;
    for (Word mask = 0; mask < (Word(1) << m2); ++mask) {
      Scalar s = coeff(mu, mask);
      if (!s.is_zero()) out[mask] = s;
    }
    return out;
  }

  ExtFiber expand(const std::map<Word, Scalar>& coeffs_by_word) const {
    ExtFiber out(n);
    for (const auto& [mask, s] : coeffs_by_word) out += s * word_exp[mask];
    return out;
  }

  bool contains(const ExtFiber& mu) const {  // mu in span of frame words?
    return (expand(coeffs(mu)) - mu).is_zero();
  }
};

// Lbar frame: letters u_j = d/dz_j (j<n), v_j = dzbar_j (letter n+j);
// duals dz_j and d/dzbar_j.
inline Frame lbar_frame(int n) {
  std::vector<ExtFiber> ls, ds;
  for (int j = 0; j < n; ++j) ls.push_back(del_z(n, j));
  for (int j = 0; j < n; ++j) ls.push_back(dzbar(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(dz(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(del_zbar(n, j));
  return Frame(n, std::move(ls), std::move(ds));
}

// L frame: letters d/dzbar_j, dz_j; duals dzbar_j, d/dz_j.
inline Frame l_frame(int n) {
  std::vector<ExtFiber> ls, ds;
  for (int j = 0; j < n; ++j) ls.push_back(del_zbar(n, j));
  for (int j = 0; j < n; ++j) ls.push_back(dz(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(dzbar(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(del_z(n, j));
  return Frame(n, std::move(ls), std::move(ds));
}

// Complex form frame: letters dz_j (j<n), dzbar_j (letter n+j); duals the
// corresponding vectors.  Words of bidegree (r,s) carry r dz and s dzbar letters.
inline Frame form_frame(int n) {
  std::vector<ExtFiber> ls, ds;
  for (int j = 0; j < n; ++j) ls.push_back(dz(n, j));
  for (int j = 0; j < n; ++j) ls.push_back(dzbar(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(del_z(n, j));
  for (int j = 0; j < n; ++j) ds.push_back(del_zbar(n, j));
  return Frame(n, std::move(ls), std::move(ds));
}

// ---- coordinates of degree-one elements ---------------------------------------
inline Vec to_coords(const ExtFiber& u) {  // length-4n coordinate vector
  assert(u.is_zero() || u.is_homogeneous(1));
  Vec v(4 * u.n);
  for (const auto& [w, s] : u.c) v[__builtin_ctz(w)] = s;
  return v;
}
inline ExtFiber from_coords(int n, const Vec& v) {
  assert(v.size() == size_t(4) * n);
  ExtFiber f(n);
  for (size_t g = 0; g < v.size(); ++g) f.add_term(Word(1) << g, v[g]);
  return f;
}

// ---- canonical objects -------------------------------------------------------
inline ExtFiber omega_top(int n) {  // Omega = dz_1 ^ ... ^ dz_n
  ExtFiber f = ExtFiber::unit(n);
  for (int j = 0; j < n; ++j) f = wedge(f, dz(n, j));
  return f;
}

// 2-form from an antisymmetric 2n x 2n coefficient matrix: sum_{i<j} M_ij dx^i ^ dx^j
inline ExtFiber two_form(int n, const Mat& M) {
  assert(M.rows == 2 * n && M.cols == 2 * n);
  ExtFiber f(n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i + 1; j < 2 * n; ++j)
      f.add_term((Word(1) << (2 * n + i)) | (Word(1) << (2 * n + j)), M(i, j));
  return f;
}

// standard Kahler form  omega_0 = sum_j dx^{2j+1} ^ dx^{2j+2}
inline Mat omega_std(int n) {
  Mat M(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    M(2 * j, 2 * j + 1) = Scalar(1);
    M(2 * j + 1, 2 * j) = Scalar(-1);
  }
  return M;
}

// e^{B} for a 2-form B (finite sum; forms on a 2n-torus vanish past degree 2n)
inline ExtFiber exp_two_form(const ExtFiber& B) {
  assert(B.is_zero() || B.is_homogeneous(2));
  ExtFiber acc = ExtFiber::unit(B.n);
  ExtFiber pw = ExtFiber::unit(B.n);
  mpq_class fact(1);
  for (int k = 1; k <= 2 * B.n; ++k) {
    pw = wedge(pw, B);
    if (pw.is_zero()) break;
    fact *= k;
    acc += Scalar(mpq_class(1) / fact) * pw;
  }
  return acc;
}

// symplectic pure spinor  psi_0 = e^{i omega}
inline ExtFiber psi0_spinor(int n, const Mat& omega) {
  return exp_two_form(Scalar::I() * two_form(n, omega));
}

// standard complex structure on T (2n x 2n): J d/dx^{2j+1} = d/dx^{2j+2}
inline Mat Jstd(int n) {
  Mat J(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    J(2 * j + 1, 2 * j) = Scalar(1);
    J(2 * j, 2 * j + 1) = Scalar(-1);
  }
  return J;
}

// Generalized complex structure of a complex structure J, as a 4n x 4n matrix
// acting on [vectors; covectors]:  diag(-J, J*).
inline Mat gc_of_complex(const Mat& J) {
  int d = J.rows;
  Mat A(2 * d, 2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      A(r, c) = -J(r, c);
      A(d + r, d + c) = J(c, r);  // J transpose on covectors
    }
  return A;
}

// Generalized complex structure of a symplectic form, [[0, -w^{-1}],[w, 0]]
// where w is the OPERATOR X -> iota_X omega.  The argument is the coefficient
// matrix omega_ij = omega(d_i, d_j), whose operator is its transpose = -omega,
// so in coefficient terms the blocks are [[0, omega^{-1}],[-omega, 0]].  The
// +i eigenbundle is then the annihilator {X - i iota_X omega} of e^{i omega}.
inline Mat gc_of_symplectic(const Mat& omega) {
  int d = omega.rows;
  auto oinv = inverse(omega);
  assert(oinv.has_value());
  Mat A(2 * d, 2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      A(r, d + c) = (*oinv)(r, c);
      A(d + r, c) = -omega(r, c);
    }
  return A;
}

}  // namespace gkd
