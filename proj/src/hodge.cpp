#include "gkd/hodge.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gkd {

HodgeEngine::HodgeEngine(int n) : n_(n), dim_(1 << (2 * n)) {
  gw_.resize(dim_);
  for (Word w = 0; w < Word(dim_); ++w) {
    int u = 0, v = 0;
    for (int j = 0; j < n_; ++j) {
      if (w & (Word(1) << j)) ++u;
      if (w & (Word(1) << (n_ + j))) ++v;
    }
    // |u_j|^2 = 1/2, |v_j|^2 = 2, letters mutually orthogonal.
    mpq_class q(1);
    for (int i = 0; i < u; ++i) q /= 2;
    for (int i = 0; i < v; ++i) q *= 2;
    gw_[w] = q;
  }
}

mpq_class HodgeEngine::gram_weight(Word w) const {
  assert(w < Word(dim_));
  return gw_[w];
}

Scalar HodgeEngine::herm_fiber(const ExtFiber& x, const ExtFiber& y) const {
  Scalar s;
  for (const auto& [w, c] : x.c) {
    Scalar cy = y.coeff(w);
    if (cy == Scalar(0)) continue;
    assert(w < Word(dim_));
    s += Scalar(gw_[w]) * c * cy.conj();
  }
  return s;
}

Scalar HodgeEngine::l2_pair(const XSec& x, const XSec& y) const {
  Scalar s;
  for (const auto& [k, f] : x.t) {
    auto it = y.t.find(k);
    if (it != y.t.end()) s += herm_fiber(f, it->second);
  }
  return s;
}

Vec HodgeEngine::fiber_to_vec(const ExtFiber& f) const {
  Vec v(dim_, Scalar(0));
  for (const auto& [w, c] : f.c) {
    assert(w < Word(dim_) && "section is not in lrep encoding");
    v[w] = c;
  }
  return v;
}

ExtFiber HodgeEngine::vec_to_fiber(const Vec& v) const {
  ExtFiber f(n_);
  for (Word w = 0; w < Word(dim_); ++w)
    if (!(v[w] == Scalar(0))) f.add_term(w, v[w]);
  return f;
}

FreqHodge HodgeEngine::build(const Freq& k) const {
  FreqHodge H;
  H.k = k;
  // w(k) = sum_j Dzbar_j(k) v_j as an lrep one-letter form.
  ExtFiber wk(n_);
  for (int j = 0; j < n_; ++j) {
    Scalar c = Dzbar(k, j);
    if (!(c == Scalar(0))) wk.add_term(Word(1) << (n_ + j), c);
  }
  // D: column w = wk wedge e_w.
  Mat D(dim_, dim_);
  for (Word w = 0; w < Word(dim_); ++w) {
    ExtFiber col = wedge(wk, ExtFiber::term(n_, w, Scalar(1)));
    for (const auto& [ww, c] : col.c) D(ww, w) = c;
  }
  // Metric adjoint w.r.t. the diagonal Gram M: Dstar = M^{-1} D^dagger M.
  Mat Ds = D.conj_transpose();
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      Scalar& e = Ds(r, c);
      if (!(e == Scalar(0))) e = Scalar(gw_[c] / gw_[r]) * e;
    }
  Mat Delta = D * Ds + Ds * D;
  // Orthogonal projector onto ker Delta: P = K S^{-1} K^dagger M with
  // S = K^dagger M K the kernel Gram matrix.
  std::vector<Vec> kb = kernel_basis(Delta);
  Mat P(dim_, dim_);
  if (!kb.empty()) {
    int r = static_cast<int>(kb.size());
    Mat K(dim_, r);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < dim_; ++i) K(i, j) = kb[j][i];
    Mat Kd = K.conj_transpose();  // r x dim
    Mat KdM = Kd;
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < dim_; ++c) KdM(i, c) = Scalar(gw_[c]) * KdM(i, c);
    Mat S = KdM * K;
    auto Sinv = inverse(S);
    assert(Sinv && "kernel Gram matrix must be invertible (metric is positive)");
    P = K * (*Sinv) * KdM;
  }
  // Green operator: (Delta + Pharm) is invertible; Green kills harmonics and
  // inverts Delta on its image.
  Mat I = Mat::id(dim_);
  auto Ginv = inverse(Delta + P);
  assert(Ginv && "Delta + Pharm must be invertible");
  H.D = std::move(D);
  H.Dstar = std::move(Ds);
  H.Delta = std::move(Delta);
  H.Pharm = P;
  H.Green = (*Ginv) * (I - P);
  return H;
}

const FreqHodge& HodgeEngine::at(const Freq& k) const {
  auto it = cache_.find(k);
  if (it == cache_.end()) it = cache_.emplace(k, build(k)).first;
  return it->second;
}

void HodgeEngine::ensure(const std::vector<Freq>& ks) const {
  std::vector<Freq> missing;
  for (const auto& k : ks)
    if (!cache_.count(k)) missing.push_back(k);
  if (missing.empty()) return;
  std::vector<FreqHodge> built(missing.size());
  if (par::mode() == par::Mode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < static_cast<int>(missing.size()); ++i)
      built[i] = build(missing[i]);
  } else {
    for (size_t i = 0; i < missing.size(); ++i) built[i] = build(missing[i]);
  }
  for (size_t i = 0; i < missing.size(); ++i)
    cache_.emplace(missing[i], std::move(built[i]));
}

XSec HodgeEngine::apply(const XSec& s, Op op) const {
  std::vector<Freq> ks;
  ks.reserve(s.t.size());
  for (const auto& [k, f] : s.t) {
    (void)f;
    ks.push_back(k);
  }
  ensure(ks);
  // Per-frequency jobs are independent; results are merged in map order, so
  // serial and parallel execution agree bit for bit.
  std::vector<const ExtFiber*> in(ks.size());
  {
    size_t i = 0;
    for (const auto& [k, f] : s.t) {
      (void)k;
      in[i++] = &f;
    }
  }
  std::vector<ExtFiber> out(ks.size(), ExtFiber(n_));
  auto job = [&](int i) {
    const FreqHodge& H = at(ks[i]);  // cache hit: read-only after ensure()
    const Mat* M = nullptr;
    switch (op) {
      case Op::d: M = &H.D; break;
      case Op::dstar: M = &H.Dstar; break;
      case Op::delta: M = &H.Delta; break;
      case Op::green: M = &H.Green; break;
      case Op::harm: M = &H.Pharm; break;
    }
    out[i] = vec_to_fiber((*M) * fiber_to_vec(*in[i]));
  };
  if (par::mode() == par::Mode::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < static_cast<int>(ks.size()); ++i) job(i);
  } else {
    for (int i = 0; i < static_cast<int>(ks.size()); ++i) job(i);
  }
  XSec r(n_);
  for (size_t i = 0; i < ks.size(); ++i)
    if (!out[i].is_zero()) r.t.emplace(ks[i], std::move(out[i]));
  return r;
}

std::vector<XSec> HodgeEngine::harmonic_basis(int p) const {
  std::vector<XSec> basis;
  for (Word w = 0; w < Word(dim_); ++w)
    if (word_deg(w) == p)
      basis.push_back(XSec::constant(ExtFiber::term(n_, w, Scalar(1))));
  return basis;
}

XSec HodgeEngine::d_L(const XSec& s) const { return apply(s, Op::d); }
XSec HodgeEngine::d_L_star(const XSec& s) const { return apply(s, Op::dstar); }
XSec HodgeEngine::laplacian(const XSec& s) const { return apply(s, Op::delta); }
XSec HodgeEngine::green(const XSec& s) const { return apply(s, Op::green); }
XSec HodgeEngine::harmonic(const XSec& s) const { return apply(s, Op::harm); }

}  // namespace gkd
