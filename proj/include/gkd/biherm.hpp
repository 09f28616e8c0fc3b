#pragma once
// Bihermitian realization of deformed generalized Kahler pairs on the flat
// torus, and the per-order correction loop that produces them.
//
// The undeformed pair is (J_J, J_psi): the standard complex structure J with
// canonical form Omega = dz_1 ^ ... ^ dz_n, and psi_0 = e^{i omega}.  The two
// eigenbundle intersections
//   Lbar^+ = Lbar_J cap Lbar_psi,      Lbar^- = Lbar_J cap L_psi
// project isomorphically onto the complexified tangent bundle; their inverse
// projections are the constant tangent lifts
//   lift^{pm} v = hatJ^{pm}(v + iota_v omega),   hatJ^{pm}(v + eta) = v -+ J* eta.
// Composing a Clifford flow Ad_{e^{Z(t)}}, e^{Z} = e^{a} e^{b}, with a lift
// and the projection back to T gives the endomorphism series
//   Gamma^{pm}(t) = pi o Ad_{e^{Z(t)}} o lift^{pm},
// which conjugate J into the bihermitian pair
//   J^{pm}(t) = Gamma^{pm}(t) o J o (Gamma^{pm}(t))^{-1}.
//
// The correction loop builds, order by order, real series
//   a_k = ahat_k + gamma_k  (ahat_k from a Green-operator solve of the
//                            integrability defect, gamma_k in T.T*),
//   b_k in the mixed quadratic bundle of the commuting pair,
// such that the canonical-line flow stays integrable, the symplectic spinor
// flow stays closed, and every order of Gamma^{+} commutes with J -- so the
// first complex structure of the pair never moves while J^{-}(t) carries the
// deformation.  The metric h(t) and two-form field b(t) of the pair come from
// the block decomposition of the positive-definite product of the two flowed
// generalized structures.
//
// All checkers re-derive their statements from the raw flows (exponential
// action + exterior derivative + grading projectors), not from the loop's
// internal solvers.

#include <string>
#include <vector>

#include "gkd/gk.hpp"

namespace gkd {

// The order-0 metric block of the deformed pair is not symmetric positive
// definite: the input data admits no Riemannian bihermitian realization.
struct DegenerateMetric : std::runtime_error {
  explicit DegenerateMetric(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- constant fiber maps ----------------------------------------------------------

// hatJ^{pm} on generator coordinates: v + eta -> v -+ J* eta, where J* is the
// dual map on covector coefficients ((J* eta)(v) = eta(J v), i.e. J transpose).
Mat hat_J_matrix(int sign, const Mat& J);
// fiber-level action on a degree-one element
ExtFiber hat_J(int sign, const ExtFiber& E, const Mat& J);

// tangent lift (4n x 2n): v -> hatJ^{pm}(v + iota_v omega).  Its columns span
// Lbar^{pm} of the undeformed pair after complexification; the top block is
// the identity, so pi o lift^{pm} = id.
Mat tangent_lift(int sign, const Mat& J, const Mat& omega);

// ---- matrix-section series helpers ------------------------------------------------

// adjoint flow Ad_{e^{Z(t)}} on generators, as exp of the Clifford adjoint
MSeries ad_exp(const XSeries& Z, int n);
// flow of the product e^{a(t)} e^{b(t)}: Ad_{e^{a}} Ad_{e^{b}}
MSeries ad_exp_product(const XSeries& a, const XSeries& b, int n);

// truncated product, transpose, conjugate tests and inverse (the order-0
// coefficient must be a constant invertible matrix)
MSeries mseries_mul(const MSeries& A, const MSeries& B);
MSeries mseries_transpose(const MSeries& A);
MSeries mseries_inverse(const MSeries& A);
MSeries mseries_const(int n, const Mat& M, int N);
bool mseries_is_real(const MSeries& A);
// evaluation of a matrix section at x = (pi/2) q (Gaussian-unit characters)
Mat matsec_eval_quarter(const MatSec& ms, const Freq& q);

// ---- endomorphism projection series -----------------------------------------------

struct GammaMap {
  int sign = +1;  // +1 -> Gamma^+, -1 -> Gamma^-
  MSeries S;      // 2n x 2n matrix-section coefficients; order 0 = identity
};

// Gamma^{pm} of a single Clifford flow e^{Z(t)}
GammaMap gamma_pm(const XSeries& Z, const Mat& omega, const Mat& J, int sign);
// Gamma^{pm} of the product flow e^{a(t)} e^{b(t)}
GammaMap gamma_pm(const XSeries& a, const XSeries& b, const Mat& omega,
                  const Mat& J, int sign);

// Multiplicative action of an endomorphism series on form sections, one slot
// at a time: dx^j -> sum_m M_{jm} dx^m, so that (twist alpha)(v, ...) =
// alpha(M v, ...).  With M = Gamma^{-1} this is the induced action of Gamma
// on forms; with M = J it is the degree-wise twist alpha(J., ..., J.).
TSeries<XSec> form_twist(const MSeries& M, const TSeries<XSec>& F);

// antisymmetric matrix series -> two-form section series
TSeries<XSec> two_form_series(const MSeries& A);

// ---- deformation state and results ------------------------------------------------

struct GKDeformationState {
  int n = 0, N = 0;
  Mat omega, J;
  XSeries eps;    // Lbar-bivector coefficients (letter representation)
  XSeries a_hat;  // real expansions: lrep_expand(eps_k) + conjugate
  XSeries b_hat;  // provisional quad coefficients, solved against a_hat
  XSeries gamma;  // T.T* corrections cancelling the order-k part of Gamma^+
  XSeries a;      // a_k = a_hat_k + gamma_k
  XSeries b;      // final quad coefficients, solved against a
};

struct BihermitianResult {
  int n = 0, N = 0;
  MSeries J_plus, J_minus;  // complex structure series on T
  MSeries h;                // metric series: symmetric, order-0 positive definite
  MSeries b_field;          // antisymmetric two-form coefficient series
  // sign s such that s * (-J_t J_{psi_t}) has the positive-definite metric
  // block; recorded because the sign of the symplectic structure operator is
  // itself a convention.
  int metric_sign = +1;
  bool j_plus_fixed = false;  // J_plus == J at every computed order
};

struct FirstOrderRow {
  MatSec gamma_route;     // order-1 coefficient of J^- from the flow
  MatSec contraction;     // -2(beta.omega + conj(beta).omega), raw index loops
  MatSec j_plus_first;    // order-1 coefficient of J^+
  Mat ks;                 // harmonic (0,1)->(1,0) part: the tangent class
  bool minus_matches = false;
  bool plus_vanishes = false;
  bool ks_nonzero = false;
  std::string summary;    // human-readable report (always rendered)
};

struct ConditionRow {
  int order = 0;
  bool line_defect_ok = false;   // canonical-line flow has no level-3 part
  bool line_filtration_ok = false;  // ... and nothing above level 1 at all
  bool spinor_closed = false;    // (d e^{a} e^{b} psi_0)_[k] = 0
  bool gamma_commutes = false;   // [(Gamma^+)_[k], J] = 0
};

struct ConditionsReport {
  std::vector<ConditionRow> rows;
  bool all_ok = false;
};

struct TorsionReport {
  TSeries<XSec> H_plus;   // torsion three-form from the plus structure
  TSeries<XSec> H_minus;  // torsion three-form from the minus structure
  TSeries<XSec> db;       // exterior derivative of the two-form field
  bool plus_matches = false;   // H_plus == db
  bool minus_matches = false;  // H_minus == db
  bool exact = false;          // shared value has no constant Fourier part
};

// Exact statements at a rational parameter value t0.  Evaluating a truncated
// series at t0 != 0 perturbs the analytic object by the dropped tail, so only
// conditions that survive that perturbation exactly are sampled: the flowed
// eigenframe against the conjugate P J P^{-1} of the evaluated projection
// matrix P (an exact complex structure by construction), closedness of the
// evaluated spinor (its series vanishes coefficientwise), and nondegeneracy
// (an open condition).  Purity is a closed quadratic condition: it is exact
// at t0 = 0 and, for flows whose exponential terminates, at every t0.
struct SampleCheck {
  Scalar t0;
  bool plus_ok = false;   // pi(Ad(t0) Lbar^+) spans the +i eigenspace of
                          // Gamma^+(t0) J Gamma^+(t0)^{-1}
  bool minus_ok = false;  // same for Lbar^- and Gamma^-
  bool spinor_closed = false;  // d(psi(t0)) = 0
  bool nondegenerate = false;  // psi(t0) ^ sigma(conj) nonzero at the sample
  bool pure = false;           // annihilator of psi(t0) has rank 2n
};

// classical contraction of a (2,0)-bivector section with the symplectic form,
// by raw index loops over fiber words (independent of the Clifford layer):
//   v -> 2 iota_{iota_v omega} beta
MatSec bivector_omega_contract(const XSec& beta, const Mat& omega);

// ---- engine -----------------------------------------------------------------------

class BihermEngine {
 public:
  BihermEngine(int n, const Mat& omega);

  int n() const { return n_; }
  const Mat& J() const { return J_; }
  const Mat& omega() const { return omega_; }
  const GKEngine& gk() const { return gk_; }
  const MCEngine& mc() const { return mc_; }

  // U^{-n+3} component of (e^{-Z} d e^{Z}) Omega at order k for the product
  // flow e^{a} e^{b}, computed through the raw exponential action
  XSec line_defect(const XSeries& a, const XSeries& b, int k) const;
  // the full order-k coefficient (for filtration-level checks)
  XSec line_flow_coeff(const XSeries& a, const XSeries& b, int k) const;
  // flowed symplectic spinor e^{a(t)} e^{b(t)} psi_0 as a series
  XSeries psi_series(const XSeries& a, const XSeries& b, int N) const;

  // Green-operator step: the Lbar-bivector eps_k of minimal L2 norm with
  // (d_L eps_k) Omega = -(order-k line defect of the prefix).  Throws
  // ObstructionNonzero when the defect has a nonzero harmonic part.
  XSec solve_ahat_step(const XSeries& a_prefix, const XSeries& b_prefix,
                       int k) const;

  // T.T* section cancelling the order-k coefficient of Gamma^+ of the
  // candidate flow (prefix plus provisional order-k coefficients)
  XSec solve_gamma_step(const XSeries& a_cand, const XSeries& b_cand,
                        int k) const;

  // the correction loop: beta must be a constant-coefficient-closed Poisson
  // (2,0)-bivector section; produces the full per-order ledger
  GKDeformationState figure1_loop(const XSec& beta, int N) const;

  // bihermitian data of a state; throws DegenerateMetric when neither sign
  // of the structure product has a positive-definite order-0 metric block
  BihermitianResult extract_bihermitian(const GKDeformationState& st) const;

  // twisted differential of a two-form series alpha under a complex-structure
  // series: W^{-1} d W alpha with (W alpha)(u, v) = alpha(Ju, Jv)
  TSeries<XSec> dc_two_form(const MSeries& Jser, const MSeries& alpha) const;

  // torsion three-forms of both structures against db
  TorsionReport torsion_report(const BihermitianResult& bh) const;

  // first-order comparison of J^- against the classical contraction
  FirstOrderRow first_order_check(const GKDeformationState& st,
                                  const BihermitianResult& bh) const;

  // re-derivation of the three per-order conditions from raw flows
  ConditionsReport check_conditions(const GKDeformationState& st) const;

  // degree bound for the flowed canonical form: d applied to any order of
  // Gamma . Omega (the multiplicative action through Gamma^{-1}) has no
  // U^{-n+3} component
  bool flowed_volume_degree_ok(const GammaMap& G, int upto) const;

  // eigenbundle dictionary, purity and nondegeneracy at a rational parameter
  // value t0 and quarter-lattice point x = (pi/2) q
  SampleCheck sample_check(const GKDeformationState& st,
                           const BihermitianResult& bh, const Scalar& t0,
                           const Freq& q) const;

 private:
  int n_;
  Mat omega_, J_;
  GKEngine gk_;
  MCEngine mc_;
  Mat lift_plus_, lift_minus_;

  XSec gamma_realization(const MatSec& M) const;  // sum M_ij d/dx_i ^ dx^j
};

}  // namespace gkd
