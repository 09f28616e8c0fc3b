#pragma once
// Order-by-order Maurer-Cartan solver, the multivariable Kuranishi family
// with its obstruction map, and a majorant-series convergence certifier —
// all in exact Gaussian-rational arithmetic.
//
// A deformation series eps(t) = sum_{k>=1} c_k t^k of degree-2 lrep sections
// (plain Taylor coefficients; see series.hpp) solves the Maurer-Cartan
// equation
//     d_L eps(t) + (1/2) [eps(t), eps(t)] = 0
// iff order by order
//     d_L c_k + (1/2) B_k = 0,   B_k = sum_{i+j=k, i,j>=1} [c_i, c_j].
// The homotopy-transfer recursion solves each order through the Green
// operator of the Hodge theory:
//     c_k = -(1/2) d_L* G B_k,
// which satisfies the order-k equation exactly iff the harmonic part H(B_k)
// vanishes; a nonzero H(B_k) is the (cohomological, here H^3-valued)
// obstruction.  Given the lower-order equations, B_k is automatically
// d_L-closed (graded Leibniz + Jacobi); the solver asserts this at every
// step rather than assuming it.
//
// The Kuranishi variant runs the same fixed point
//     eps(t) = sum_i eta_i t_i - (1/2) d_L* G [eps(t), eps(t)]
// in several variables and treats the harmonic coefficients
// H([eps(t),eps(t)])_nu as *data*: they are the defining equations of the
// analytic set of genuinely integrable parameters.  Seeds there may even
// fail to be d_L-closed; the defect is reported, never thrown.
//
// The majorant certifier compares the solution against the classical
// quadratic majorant M(t) = sum_nu (1/(16c)) (ct)^nu / nu^2, which satisfies
// M(t)^2 <= (1/c) M(t) coefficientwise (Cauchy-style domination); all
// comparisons are done on squared norms to stay inside Q.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gkd/brackets.hpp"
#include "gkd/hodge.hpp"
#include "gkd/series.hpp"

namespace gkd {

using XSeries = TSeries<XSec>;

struct ObstructionNonzero : std::runtime_error {
  int order;
  XSec witness;  // the nonzero harmonic part of the order-k bracket
  ObstructionNonzero(int k, XSec w);
};

struct ObstructionRow {
  MIdx degree;         // multi-degree (length 1 for single-parameter runs)
  XSec harmonic_part;  // H(B_degree)
  mpq_class norm2;     // squared L2 norm of the harmonic part
  bool vanishes = true;
};

struct ObstructionReport {
  std::vector<ObstructionRow> rows;  // ordered by total degree, then lex
  std::vector<XSec> seed_dL;         // d_L of each seed element
  bool seeds_closed = true;
  bool clean() const {
    if (!seeds_closed) return false;
    for (const auto& r : rows)
      if (!r.vanishes) return false;
    return true;
  }
};

// Constants are carried in squared form: the norms involved are square roots
// of rationals, their squares are exact.  M_nu = (1/(16c)) c^nu / nu^2.
struct MajorantConfig {
  mpq_class c = 2;
  mpq_class lambda = mpq_class(1, 2);  // 1/c
  mpq_class K1_sq = 1;                 // per-run: max_k |c_k|_s^2 / M_k^2
  mpq_class K2_sq = 0;                 // per-run: bracket-vs-convolution ratio
  mpq_class C1_sq = 0;                 // Green-step operator bound, squared
  int s_index = 0;
};

mpq_class majorant_M(const MajorantConfig& cfg, int nu);

struct MajorantRow {
  int k = 0;
  mpq_class norm2, bound2;     // |c_k|_s^2 vs K1^2 M_k^2
  bool norm_ok = true;
  mpq_class conv, conv_bound;  // sum_{i+j=k} M_i M_j vs lambda M_k
  bool conv_ok = true;
};

struct MajorantReport {
  MajorantConfig cfg;
  std::vector<MajorantRow> rows;
  bool certified = true;  // every row passes both checks
};

class MCEngine {
 public:
  explicit MCEngine(int n) : n_(n), br_(n), hg_(n) {}

  int n() const { return n_; }
  const BracketEngine& brackets() const { return br_; }
  const HodgeEngine& hodge() const { return hg_; }

  // Sobolev-s squared norm in the lrep fiber metric:
  //   sum_k (1+|k|^2)^s |phi_k|_h^2.
  mpq_class sobolev2(const XSec& s, int s_index) const;

  // Order-k bracket term of a one-variable prefix.
  XSec bracket_term(const XSeries& prefix, int k) const;

  // One recursion step: coefficients through order k-1 in, c_k out.
  // Asserts d_L B_k = 0; throws ObstructionNonzero when H(B_k) != 0.
  XSec mc_step(const XSeries& prefix, int k) const;

  // Solve through order N from a d_L-closed degree-2 seed (InvariantBreach
  // if the seed is not closed).  Obstructions propagate as ObstructionNonzero.
  std::pair<XSeries, ObstructionReport> mc_solve(const XSec& eps1, int N) const;

  // Multivariable Kuranishi fixed point from an arbitrary seed basis.
  // Obstruction coefficients and seed closedness defects are recorded in the
  // report as data; this never throws.
  std::pair<XSeries, ObstructionReport> kuranishi(const std::vector<XSec>& basis,
                                                  int N) const;

  // Maurer-Cartan residual d_L eps + (1/2)[eps, eps], truncated like eps.
  XSeries mc_residual(const XSeries& eps) const;

  // Majorant machinery.  default_config derives c from a per-run exact bound
  // C1 on the Green-step operator (smallest power of two with c^2 > C1^2,
  // so C1 * lambda < 1) and the empirical per-run constants K1, K2.
  MajorantConfig default_config(const XSeries& eps, int s_index) const;
  MajorantReport majorant_certify(const XSeries& eps,
                                  const MajorantConfig& cfg) const;

 private:
  int n_;
  BracketEngine br_;
  HodgeEngine hg_;
};

}  // namespace gkd
