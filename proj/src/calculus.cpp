#include "gkd/calculus.hpp"

namespace gkd {

ExtFiber u_project_fiber(const Frame& ff, const ExtFiber& f, int m) {
  assert(f.is_zero() || f.is_form());
  int n = ff.n;
  ExtFiber out(n);
  for (Word mask = 0; mask < (Word(1) << (2 * n)); ++mask) {
    int r = word_deg(mask & ((Word(1) << n) - 1));  // dz letters
    int s = word_deg(mask >> n);                    // dzbar letters
    if (s - r != m) continue;
    Scalar c = ff.coeff(f, mask);
    if (!c.is_zero()) out += c * ff.word_exp[mask];
  }
  return out;
}

ExtFiber rs_project_fiber(const Frame& ff, const ExtFiber& f, int r, int s) {
  assert(f.is_zero() || f.is_form());
  int n = ff.n;
  ExtFiber out(n);
  for (Word mask = 0; mask < (Word(1) << (2 * n)); ++mask) {
    if (word_deg(mask & ((Word(1) << n) - 1)) != r) continue;
    if (word_deg(mask >> n) != s) continue;
    Scalar c = ff.coeff(f, mask);
    if (!c.is_zero()) out += c * ff.word_exp[mask];
  }
  return out;
}

Mat metric_big(const Mat& g) {
  int d = g.rows;
  auto gi = inverse(g);
  assert(gi.has_value());
  Mat G(2 * d, 2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      G(r, c) = g(r, c);
      G(d + r, d + c) = (*gi)(r, c);
    }
  return G;
}

namespace {
Scalar gram_minor(const Mat& G, Word S, Word T) {
  int p = word_deg(S);
  if (word_deg(T) != p) return Scalar(0);
  std::vector<int> rs, cs;
  for (Word t = S; t; t &= t - 1) rs.push_back(__builtin_ctz(t));
  for (Word t = T; t; t &= t - 1) cs.push_back(__builtin_ctz(t));
  Mat sub(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sub(i, j) = G(rs[i], cs[j]);
  return det(sub);
}
}  // namespace

Scalar herm_pair_fiber(const Mat& G, const ExtFiber& x, const ExtFiber& y) {
  Scalar acc;
  for (const auto& [S, cx] : x.c)
    for (const auto& [T, cy] : y.c) {
      if (word_deg(S) != word_deg(T)) continue;
      Scalar m = gram_minor(G, S, T);
      if (!m.is_zero()) acc += cx * cy.conj() * m;
    }
  return acc;
}

mpq_class sobolev_norm2(const XSec& sec, int s_index, const Mat& G) {
  mpq_class acc(0);
  for (const auto& [k, f] : sec.t) {
    mpq_class w(1 + freq_norm2(k));
    mpq_class wp(1);
    for (int i = 0; i < s_index; ++i) wp *= w;
    acc += wp * herm_norm2_fiber(G, f);
  }
  return acc;
}

}  // namespace gkd
