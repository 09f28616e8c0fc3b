#pragma once
// Exact per-frequency Hodge theory for the algebroid differential d_L on
// sections of wedge^* Lbar over the flat torus.
//
// On each Fourier mode k, d_L acts on the finite-dimensional fiber
// wedge^* Lbar (dimension 4^n in the lrep word basis) as wedge by the
// one-letter form w(k) = sum_j Dzbar_j(k) v_j.  The fiber carries the
// positive-definite Hermitian metric induced by the flat generalized metric
// diag(g, g^{-1}) with g the standard flat metric; in the lrep word basis it
// is diagonal: |word|^2 = 2^{#v-letters - #u-letters}.
//
// For each frequency we compute, in exact Gaussian-rational arithmetic,
//   Dstar  - the metric adjoint of d_L,
//   Delta  - the Hodge Laplacian d_L Dstar + Dstar d_L,
//   Pharm  - the orthogonal projector onto ker Delta (harmonic fiber),
//   Green  - the Green operator: Delta Green = Green Delta = I - Pharm,
//            Green Pharm = Pharm Green = 0.
// On the flat torus these satisfy the Koszul identity Delta_k = (|k|^2/2) Id,
// so harmonic content lives only at k = 0; the implementation does not assume
// this (it is asserted by the test-suite as an oracle instead).
//
// Section-level operators act frequency-by-frequency; the batch driver runs
// the independent per-frequency jobs in parallel under par::Mode::openmp and
// serially otherwise, with bit-identical results.

#include <map>
#include <vector>

#include "gkd/calculus.hpp"
#include "gkd/linalg.hpp"
#include "gkd/par.hpp"
#include "gkd/section.hpp"

namespace gkd {

struct FreqHodge {
  Freq k;
  Mat D;      // d_L on the fiber (word-basis matrix, dim 4^n)
  Mat Dstar;  // metric adjoint of D
  Mat Delta;  // D Dstar + Dstar D
  Mat Pharm;  // orthogonal projector onto ker Delta
  Mat Green;  // exact Green operator
};

class HodgeEngine {
 public:
  explicit HodgeEngine(int n);

  int n() const { return n_; }
  int fiber_dim() const { return dim_; }

  // Diagonal fiber metric weight of an lrep word.
  mpq_class gram_weight(Word w) const;

  // Hermitian fiber pairing on lreps, conjugate-linear in the second slot.
  Scalar herm_fiber(const ExtFiber& x, const ExtFiber& y) const;

  // L2 pairing of sections: sum_k h(x_k, y_k)  (torus measure normalized).
  Scalar l2_pair(const XSec& x, const XSec& y) const;

  // Build-or-fetch the spectral data at one frequency.
  const FreqHodge& at(const Freq& k) const;

  // Frequency-wise operators on lrep sections.
  XSec d_L(const XSec& s) const;
  XSec d_L_star(const XSec& s) const;
  XSec laplacian(const XSec& s) const;
  XSec green(const XSec& s) const;
  XSec harmonic(const XSec& s) const;

  // Basis of the harmonic sections of degree p: the constant words of that
  // degree (size binom(2n, p)).  Verified against ker Delta by the tests.
  std::vector<XSec> harmonic_basis(int p) const;

 private:
  enum class Op { d, dstar, delta, green, harm };
  XSec apply(const XSec& s, Op op) const;
  void ensure(const std::vector<Freq>& ks) const;  // batch construct (parallel)
  FreqHodge build(const Freq& k) const;

  Vec fiber_to_vec(const ExtFiber& f) const;
  ExtFiber vec_to_fiber(const Vec& v) const;

  int n_;
  int dim_;                   // 4^n lrep words
  std::vector<mpq_class> gw_; // gram_weight by word
  mutable std::map<Freq, FreqHodge> cache_;
};

}  // namespace gkd
