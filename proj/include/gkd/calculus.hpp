#pragma once
// Differential calculus on Fourier sections over the flat torus.
// Characters e^{i k.x} diagonalize every constant-coefficient operator, so d,
// the Dolbeault operators and the U-grading all act frequency by frequency.

#include "gkd/clifford.hpp"
#include "gkd/frames.hpp"
#include "gkd/section.hpp"

namespace gkd {

// d/dz_j e^{ikx} = Dz_j(k) e^{ikx},  Dz_j(k) = (i k_{2j+1} + k_{2j+2})/2 (0-based pairs)
inline Scalar Dz(const Freq& k, int j) {
  return Scalar::rat(1, 2) * Scalar(mpq_class(k[2 * j + 1])) +
         Scalar::gauss(0, 1, 1, 2) * Scalar(mpq_class(k[2 * j]));
}
inline Scalar Dzbar(const Freq& k, int j) {
  return Scalar::rat(-1, 2) * Scalar(mpq_class(k[2 * j + 1])) +
         Scalar::gauss(0, 1, 1, 2) * Scalar(mpq_class(k[2 * j]));
}

// the one-form i sum_j k_j dx^j (symbol of d at frequency k)
inline ExtFiber d_symbol(int n, const Freq& k) {
  ExtFiber f(n);
  for (int j = 0; j < 2 * n; ++j)
    f.add_term(Word(1) << (2 * n + j), Scalar::I() * Scalar(mpq_class(k[j])));
  return f;
}
inline ExtFiber del_symbol(int n, const Freq& k) {  // sum_j Dz_j(k) dz_j
  ExtFiber f(n);
  for (int j = 0; j < n; ++j) f += Dz(k, j) * dz(n, j);
  return f;
}
inline ExtFiber delbar_symbol(int n, const Freq& k) {
  ExtFiber f(n);
  for (int j = 0; j < n; ++j) f += Dzbar(k, j) * dzbar(n, j);
  return f;
}

inline XSec exterior_d(const XSec& s) {
  return s.map_fibers([&](const Freq& k, const ExtFiber& f) {
    return wedge(d_symbol(s.n, k), f);
  });
}
inline XSec del_op(const XSec& s) {  // classical del (lowers the U-grading)
  return s.map_fibers([&](const Freq& k, const ExtFiber& f) {
    return wedge(del_symbol(s.n, k), f);
  });
}
inline XSec delbar_op(const XSec& s) {  // classical delbar (raises the U-grading)
  return s.map_fibers([&](const Freq& k, const ExtFiber& f) {
    return wedge(delbar_symbol(s.n, k), f);
  });
}

// ---- U-grading -----------------------------------------------------------------
// U^m = (+) over bidegrees (r,s) with s - r = m;  U^{-n} is the canonical line.
ExtFiber u_project_fiber(const Frame& ff, const ExtFiber& f, int m);

inline XSec u_project(const XSec& s, int m) {
  static thread_local int cached_n = -1;
  static thread_local Frame ff;
  if (cached_n != s.n) {
    ff = form_frame(s.n);
    cached_n = s.n;
  }
  XSec out(s.n);
  for (const auto& [k, f] : s.t) out.add_term(k, u_project_fiber(ff, f, m));
  return out;
}

// bidegree (r,s) projection of a form section
ExtFiber rs_project_fiber(const Frame& ff, const ExtFiber& f, int r, int s);

// ---- hermitian fiber metric and Sobolev norms ------------------------------------
// On generators: h(d_i, d_j) = g_ij, h(dx^i, dx^j) = (g^{-1})_ij, mixed = 0.
// Extended to words by the Gram determinant; Hermitian in the second slot.
Mat metric_big(const Mat& g);  // 4n x 4n block diag(g, g^{-1})

// h(x, y) = sum over word pairs of c_x conj(c_y) det(G[S,T])
Scalar herm_pair_fiber(const Mat& G, const ExtFiber& x, const ExtFiber& y);

inline mpq_class herm_norm2_fiber(const Mat& G, const ExtFiber& x) {
  Scalar s = herm_pair_fiber(G, x, x);
  assert(s.im == 0);
  return s.re;
}

// Sobolev-s squared norm: sum_k (1 + |k|^2)^s |phi_k|_h^2
mpq_class sobolev_norm2(const XSec& sec, int s_index, const Mat& G);

}  // namespace gkd
