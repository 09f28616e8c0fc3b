#pragma once
// Generalized Kahler deformation machinery.
//
// Around the standard complex structure J and a compatible constant symplectic
// form omega (spinors Omega = dz_1...dz_n and psi_0 = e^{i omega}) this layer
// provides:
//   * the U(1)-grading U^{-n+p} of forms induced by J, with exact projectors
//     (U^{-n+p} is spanned by p-fold products of Lbar generators applied to
//     the canonical line),
//   * integrability defects of Clifford-exponential deformations e^{a(t)} of
//     the canonical spinor line: the U^{-n+3} component of e^{-a} d e^{a}
//     applied to Omega, order by order,
//   * conversion between Lbar-bivector deformation series eps(t) (the
//     Maurer-Cartan picture) and real Clifford series a(t) with the same
//     eigenbundle flow, in both directions,
//   * the auxiliary series b(t), valued in the real part of the mixed
//     quadratic bundle singled out by the commuting pair (J_J, J_psi), that
//     keeps the second spinor closed: (d e^{a(t)} e^{b(t)} psi_0)_[k] = 0,
//   * the spinor -> generalized-complex-structure dictionary at points where
//     every character e^{i k.x} takes a Gaussian-rational value.
//
// All arithmetic is exact; constant-coefficient operators act frequency by
// frequency, which the solvers exploit to reduce every order to finite exact
// linear algebra.

#include <memory>
#include <stdexcept>
#include <vector>

#include "gkd/calculus.hpp"
#include "gkd/gcs.hpp"
#include "gkd/mc.hpp"

namespace gkd {

// A spinor whose annihilator is too small to define a generalized complex
// structure (purity failure).
struct NotPure : std::runtime_error {
  NotPure() : std::runtime_error("spinor is not pure (annihilator rank < 2n)") {}
};

// A pure spinor line with L cap conj(L) != 0 (vanishing Chevalley pairing
// with its conjugate); it defines no generalized complex structure.
struct Degenerate : std::runtime_error {
  Degenerate()
      : std::runtime_error("spinor line is degenerate: <phi, rev conj(phi)> = 0") {}
};

// An exactly unsolvable constrained linear step.  `witness` carries the part
// of the forcing term that no admissible unknown can balance (for the spinor
// closedness solve: the constant/left-over part of the forcing, which is
// exactly its harmonic obstruction on the flat torus).
struct NoSolution : std::runtime_error {
  int order;
  XSec witness;
  NoSolution(int k, XSec w, const std::string& msg)
      : std::runtime_error(msg), order(k), witness(std::move(w)) {}
};

using MSeries = TSeries<MatSec>;

// per-frequency Clifford adjoint matrices of a CL2-carrier section
MatSec ad_matsec(const XSec& W);

// span membership of a fiber in the linear span of given fibers (exact rank test)
bool in_fiber_span(const std::vector<ExtFiber>& basis, const ExtFiber& f);

// ---- U-grading ------------------------------------------------------------------
// Projectors pi_{U^{-n+p}}, p = 0..2n.  They are idempotent, pairwise
// orthogonal and sum to the identity; generators of L annihilate U^{-n} and
// generators of Lbar raise p by exactly one.
class UGrading {
 public:
  explicit UGrading(int n) : n_(n), ff_(form_frame(n)) {}
  int n() const { return n_; }

  ExtFiber project_fiber(int p, const ExtFiber& f) const {
    return u_project_fiber(ff_, f, p - n_);
  }
  XSec project(int p, const XSec& s) const {
    XSec out(s.n);
    for (const auto& [k, f] : s.t) out.add_term(k, project_fiber(p, f));
    return out;
  }

 private:
  int n_;
  Frame ff_;
};

// ---- quadratic bundle of a commuting pair ----------------------------------------
// The two commuting structures J_J (complex) and J_psi (symplectic) split
// W (x) C into four simultaneous eigenbundles
//   L+ = L_J cap L_psi,   L- = L_J cap Lbar_psi,  and their conjugates.
// The mixed quadratic bundle  Q = L- . Lbar+  (+)  Lbar- . L+  consists of the
// Clifford products of the indicated pairs; because each pair lies in a
// common isotropic (L_psi or Lbar_psi), these products are pure wedge words.
struct QuadFrame {
  int n = 0;
  Mat JJ, Jpsi;                     // the commuting 4n x 4n structure matrices
  std::vector<Vec> Lp, Lm, Lbp, Lbm;  // coordinate bases, n vectors each
  // CL2 carriers of Q: the L- . Lbar+ products (n^2 of them) followed by
  // their conjugates (Lbar- . L+), in matching order.
  std::vector<ExtFiber> carriers;
};
QuadFrame quad_frame(int n, const Mat& omega);

// real quad-bundle membership of a CL2 carrier fiber
inline bool quad_member(const QuadFrame& qf, const ExtFiber& W) {
  return in_fiber_span(qf.carriers, W);
}

// ---- engine ----------------------------------------------------------------------
class GKEngine {
 public:
  // standard complex structure; omega a constant symplectic form whose
  // generalized structure commutes with it
  GKEngine(int n, const Mat& omega);

  int n() const { return n_; }
  const UGrading& grading() const { return ug_; }
  const QuadFrame& quad() const { return qf_; }
  const XSec& psi0() const { return psi0_; }
  const Mat& PL() const { return PL_; }        // projector onto L_J
  const Mat& PLbar() const { return PLbar_; }  // projector onto Lbar_J

  // e^{sign * a(t)} applied to a form-section series, truncated at the
  // series order.  Coefficients of a act through the quantized CL2 action.
  XSeries exp_apply(const XSeries& a, const XSeries& target, int sign) const;

  // order-k coefficient of (e^{-a(t)} d e^{a(t)}) Omega (single-variable a)
  XSec conjugated_d_coeff(const XSeries& a, int k) const;
  // its U^{-n+3} component: the obstruction to integrability at order k.
  // Coefficients of a must be real CL2 carriers with zero constant term.
  XSec integrability_defect(const XSeries& a, int k) const;

  // Real Clifford series a(t) = sum (mu_k + conj mu_k), mu_k a section of
  // Lambda^2 Lbar, with the same +i eigenbundle flow as the Lbar-bivector
  // series eps(t) (coefficients in the Lbar word representation):
  //   P_Lbar (e^{-ad_eps(t)} e^{ad_a(t)}) P_L = 0  order by order.
  // Each order reduces to one exact linear solve per frequency; the solution
  // is unique.  Throws NoSolution if some order is unsolvable (impossible for
  // an eigenbundle flow that actually comes from a bivector series).
  XSeries realify(const XSeries& eps, int N) const;
  // inverse direction: recover the Lbar-bivector series from a real one
  XSeries complexify(const XSeries& a, int N) const;

  // Order-k coefficient b_k solving  (d e^{a(t)} e^{b(t)} psi_0)_[k] = 0
  // given all of a and b_1..b_{k-1} (single-variable series).  b_k is real,
  // valued in the quadratic bundle, and chosen of minimum coefficient norm
  // among the exact solutions.  Throws NoSolution (with the unbalanced
  // harmonic forcing as witness) when no quad-bundle section works, and
  // InvariantBreach if the prefix does not already solve the lower orders.
  XSec solve_b_step(const XSeries& a, const XSeries& b_prefix, int k) const;
  // all orders 1..N
  XSeries solve_b(const XSeries& a, int N) const;

  // evaluation at x = (pi/2) q, where every character is a Gaussian unit
  ExtFiber eval_quarter(const XSec& s, const Freq& q) const;
  // spinor -> generalized complex structure at such a point
  GCFiber gc_at_quarter(const XSec& psi, const Freq& q) const;

 private:
  int n_;
  Mat omega_;
  UGrading ug_;
  QuadFrame qf_;
  XSec psi0_;
  Mat PL_, PLbar_;
  Frame lbar_;
  std::vector<Word> mu_words_;        // degree-2 Lbar words (unknown basis)
  std::unique_ptr<Factor> mu_fac_;    // columns vec(P_Lbar ad(word) P_L)

  void check_carrier_series(const XSeries& a, bool require_real) const;
  // shared order-by-order eigenbundle matching; direction = +1 solves for a
  // given eps, direction = -1 solves for eps given a
  XSeries match_eigenflow(const XSeries& src, int N, int direction) const;
};

}  // namespace gkd
