#include "gkd/biherm.hpp"

#include <algorithm>
#include <sstream>

#include "gkd/brackets.hpp"
#include "gkd/hodge.hpp"

namespace gkd {

namespace {

XSeries zero_xseries(int n, int N) { return XSeries(XSec(n), 1, N); }

MatSec matsec_block(const MatSec& ms, int r0, int c0, int rr, int cc) {
  MatSec out(ms.n, rr, cc);
  for (const auto& [k, m] : ms.t) {
    Mat b(rr, cc);
    for (int r = 0; r < rr; ++r)
      for (int c = 0; c < cc; ++c) b(r, c) = m(r0 + r, c0 + c);
    out.add_term(k, b);
  }
  return out;
}

MSeries mseries_block(const MSeries& A, int r0, int c0, int rr, int cc) {
  MSeries out(MatSec(A.zero().n, rr, cc), 1, A.trunc());
  for (const auto& [nu, ms] : A.terms()) out.set(nu, matsec_block(ms, r0, c0, rr, cc));
  return out;
}

std::string mat_to_str(const Mat& m) {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < m.rows; ++r) {
    if (r) os << "; ";
    for (int c = 0; c < m.cols; ++c) {
      if (c) os << ", ";
      os << m(r, c).str();
    }
  }
  os << "]";
  return os.str();
}

std::string matsec_to_str(const MatSec& ms) {
  if (ms.t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, m] : ms.t) {
    if (!first) os << " + ";
    first = false;
    bool flat = true;
    for (int v : k)
      if (v) flat = false;
    if (!flat) {
      os << "e^(i[";
      for (size_t i = 0; i < k.size(); ++i) {
        if (i) os << ",";
        os << k[i];
      }
      os << "].x) ";
    }
    os << mat_to_str(m);
  }
  return os.str();
}

}  // namespace

// ---- constant fiber maps ----------------------------------------------------------

Mat hat_J_matrix(int sign, const Mat& J) {
  assert(sign == 1 || sign == -1);
  const int d = J.rows;
  Mat out(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) out(i, i) = Scalar(1);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(d + r, d + c) = Scalar(-sign) * J(c, r);
  return out;
}

ExtFiber hat_J(int sign, const ExtFiber& E, const Mat& J) {
  if (E.is_zero()) return E;
  if (!E.is_homogeneous(1))
    throw InvariantBreach("hat_J acts on degree-one elements only");
  Vec v = to_coords(E);
  return from_coords(E.n, hat_J_matrix(sign, J) * v);
}

Mat tangent_lift(int sign, const Mat& J, const Mat& omega) {
  assert(sign == 1 || sign == -1);
  const int d = J.rows;
  Mat bottom = Scalar(sign) * (J.transpose() * omega);
  Mat out(2 * d, d);
  for (int i = 0; i < d; ++i) out(i, i) = Scalar(1);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(d + r, c) = bottom(r, c);
  return out;
}

// ---- matrix-section series helpers ------------------------------------------------

MSeries ad_exp(const XSeries& Z, int n) {
  MSeries A(MatSec(n, 4 * n, 4 * n), 1, Z.trunc());
  for (const auto& [nu, sec] : Z.terms()) A.set(nu, ad_matsec(sec));
  return series_exp(A, MatSec::constant(n, Mat::id(4 * n)),
                    [](const MatSec& x, const MatSec& y) { return convolve_mat(x, y); });
}

MSeries ad_exp_product(const XSeries& a, const XSeries& b, int n) {
  return mseries_mul(ad_exp(a, n), ad_exp(b, n));
}

MSeries mseries_mul(const MSeries& A, const MSeries& B) {
  const int N = std::min(A.trunc(), B.trunc());
  MSeries out(MatSec(A.zero().n, A.zero().rows, B.zero().cols), 1, N);
  for (const auto& [mu, x] : A.terms())
    for (const auto& [rho, y] : B.terms()) {
      if (midx_total(mu) + midx_total(rho) > N) continue;
      out.add(midx_add(mu, rho), convolve_mat(x, y));
    }
  return out;
}

MSeries mseries_transpose(const MSeries& A) {
  MSeries out(MatSec(A.zero().n, A.zero().cols, A.zero().rows), 1, A.trunc());
  for (const auto& [nu, ms] : A.terms()) {
    MatSec t(ms.n, ms.cols, ms.rows);
    for (const auto& [k, m] : ms.t) t.add_term(k, m.transpose());
    out.set(nu, t);
  }
  return out;
}

MSeries mseries_const(int n, const Mat& M, int N) {
  MSeries out(MatSec(n, M.rows, M.cols), 1, N);
  out.set(MIdx{0}, MatSec::constant(n, M));
  return out;
}

bool mseries_is_real(const MSeries& A) {
  for (const auto& [nu, ms] : A.terms())
    if (!(ms.conj() == ms)) return false;
  return true;
}

MSeries mseries_inverse(const MSeries& A) {
  const int N = A.trunc();
  const MatSec& A0 = A.coeff1(0);
  if (A0.t.size() != 1 || freq_norm2(A0.t.begin()->first) != 0)
    throw InvariantBreach("series inverse needs a constant order-0 coefficient");
  auto inv0 = inverse(A0.t.begin()->second);
  if (!inv0) throw InvariantBreach("series inverse: order-0 coefficient is singular");
  const int n = A.zero().n;
  MatSec I0 = MatSec::constant(n, *inv0);
  MSeries B(MatSec(n, A.zero().rows, A.zero().cols), 1, N);
  B.set(MIdx{0}, I0);
  for (int k = 1; k <= N; ++k) {
    MatSec s(n, A.zero().rows, A.zero().cols);
    for (int j = 1; j <= k; ++j) s += convolve_mat(A.coeff1(j), B.coeff1(k - j));
    B.set(MIdx{k}, Scalar(-1) * convolve_mat(I0, s));
  }
  return B;
}

Mat matsec_eval_quarter(const MatSec& ms, const Freq& q) {
  Mat out(ms.rows, ms.cols);
  for (const auto& [k, m] : ms.t) {
    long dot = 0;
    assert(k.size() == q.size());
    for (size_t i = 0; i < k.size(); ++i) dot += static_cast<long>(k[i]) * q[i];
    out = out + ipow(dot) * m;
  }
  return out;
}

// ---- endomorphism projection series -----------------------------------------------

static GammaMap gamma_from_ad(const MSeries& Ad, const Mat& omega, const Mat& J,
                              int sign) {
  const int twon = J.rows;
  const int n = twon / 2;
  Mat lift = tangent_lift(sign, J, omega);
  GammaMap G;
  G.sign = sign;
  G.S = MSeries(MatSec(n, twon, twon), 1, Ad.trunc());
  for (const auto& [nu, ms] : Ad.terms()) {
    MatSec out(n, twon, twon);
    for (const auto& [k, m] : ms.t) {
      Mat full = m * lift;  // 4n x 2n
      Mat top(twon, twon);
      for (int r = 0; r < twon; ++r)
        for (int c = 0; c < twon; ++c) top(r, c) = full(r, c);
      out.add_term(k, top);
    }
    G.S.set(nu, out);
  }
  return G;
}

GammaMap gamma_pm(const XSeries& Z, const Mat& omega, const Mat& J, int sign) {
  return gamma_from_ad(ad_exp(Z, J.rows / 2), omega, J, sign);
}

GammaMap gamma_pm(const XSeries& a, const XSeries& b, const Mat& omega, const Mat& J,
                  int sign) {
  return gamma_from_ad(ad_exp_product(a, b, J.rows / 2), omega, J, sign);
}

TSeries<XSec> form_twist(const MSeries& M, const TSeries<XSec>& F) {
  const int n = M.zero().n;
  const int twon = 2 * n;
  const int N = std::min(M.trunc(), F.trunc());
  // image of each covector generator, as a one-form series
  std::vector<TSeries<XSec>> gen(twon, TSeries<XSec>(XSec(n), 1, N));
  for (int j = 0; j < twon; ++j) {
    TSeries<XSec> g(XSec(n), 1, N);
    for (const auto& [nu, ms] : M.terms()) {
      XSec s(n);
      for (const auto& [k, m] : ms.t) {
        ExtFiber f(n);
        for (int c = 0; c < twon; ++c)
          f.add_term(Word(1) << (twon + c), m(j, c));
        s.add_term(k, f);
      }
      g.add(nu, s);
    }
    gen[j] = g;
  }
  auto wdg = [](const XSec& x, const XSec& y) { return swedge(x, y); };
  TSeries<XSec> out(XSec(n), 1, N);
  for (const auto& [nu, sec] : F.terms()) {
    for (const auto& [k, fib] : sec.t) {
      for (const auto& [w, c] : fib.c) {
        if (w & ((Word(1) << twon) - 1))
          throw InvariantBreach("form_twist: section has vector components");
        TSeries<XSec> acc(XSec(n), 1, N);
        acc.set(nu, XSec::mono(k, ExtFiber::term(n, 0, c)));
        for (Word rest = w; rest; rest &= rest - 1) {
          int g = __builtin_ctz(rest) - twon;
          acc = TSeries<XSec>::combine(acc, gen[g], wdg);
        }
        out += acc;
      }
    }
  }
  return out;
}

TSeries<XSec> two_form_series(const MSeries& A) {
  const int n = A.zero().n;
  TSeries<XSec> out(XSec(n), 1, A.trunc());
  for (const auto& [nu, ms] : A.terms()) {
    XSec s(n);
    for (const auto& [k, m] : ms.t) {
      if (!(m + m.transpose()).is_zero())
        throw InvariantBreach("two_form_series: coefficient matrix not antisymmetric");
      s.add_term(k, two_form(n, m));
    }
    out.set(nu, s);
  }
  return out;
}

// ---- raw contraction ---------------------------------------------------------------

MatSec bivector_omega_contract(const XSec& beta, const Mat& omega) {
  const int n = beta.n;
  const int twon = 2 * n;
  MatSec out(n, twon, twon);
  for (const auto& [k, fib] : beta.t) {
    Mat m(twon, twon);
    for (const auto& [w, c] : fib.c) {
      if (word_deg(w) != 2 || (w >> twon))
        throw InvariantBreach("bivector_omega_contract: not a bivector word");
      const int p = __builtin_ctz(w);
      const int q = __builtin_ctz(w & (w - 1));
      // word = d/dx_{p+1} ^ d/dx_{q+1} with p < q; for v = d/dx_{l+1} the
      // covector iota_v omega has components omega(l, .), and contracting it
      // into the bivector (with the doubled normalization) gives
      //   2 c [ omega(l, p) d/dx_{q+1} - omega(l, q) d/dx_{p+1} ].
      for (int l = 0; l < twon; ++l) {
        m(q, l) += Scalar(2) * c * omega(l, p);
        m(p, l) -= Scalar(2) * c * omega(l, q);
      }
    }
    out.add_term(k, m);
  }
  return out;
}

// ---- engine -----------------------------------------------------------------------

BihermEngine::BihermEngine(int n, const Mat& omega)
    : n_(n),
      omega_(omega),
      J_(Jstd(n)),
      gk_(n, omega),
      mc_(n),
      lift_plus_(tangent_lift(+1, J_, omega_)),
      lift_minus_(tangent_lift(-1, J_, omega_)) {
  // the lifts must invert the tangent projection on the two eigenbundle
  // intersections of the undeformed pair
  auto check = [&](const std::vector<Vec>& basis, const Mat& lift, const char* side) {
    for (const Vec& v : basis) {
      Vec top(2 * n_);
      for (int i = 0; i < 2 * n_; ++i) top[i] = v[i];
      Vec lifted = lift * top;
      for (int i = 0; i < 4 * n_; ++i)
        if (!(lifted[i] == v[i]))
          throw InvariantBreach(std::string("tangent lift does not invert the "
                                            "projection on ") + side);
    }
  };
  check(gk_.quad().Lbp, lift_plus_, "Lbar^+");
  check(gk_.quad().Lbm, lift_minus_, "Lbar^-");
}

XSec BihermEngine::line_flow_coeff(const XSeries& a, const XSeries& b, int k) const {
  XSeries om = zero_xseries(n_, k);
  om.set(MIdx{0}, XSec::constant(omega_top(n_)));
  XSeries phi = gk_.exp_apply(a, gk_.exp_apply(b, om, +1), +1);
  XSeries dphi = zero_xseries(n_, k);
  for (const auto& [nu, s] : phi.terms()) dphi.set(nu, exterior_d(s));
  XSeries u = gk_.exp_apply(b, gk_.exp_apply(a, dphi, -1), -1);
  return u.coeff1(k);
}

XSec BihermEngine::line_defect(const XSeries& a, const XSeries& b, int k) const {
  return gk_.grading().project(3, line_flow_coeff(a, b, k));
}

XSeries BihermEngine::psi_series(const XSeries& a, const XSeries& b, int N) const {
  XSeries p0 = zero_xseries(n_, N);
  p0.set(MIdx{0}, gk_.psi0());
  return gk_.exp_apply(a, gk_.exp_apply(b, p0, +1), +1);
}

XSec BihermEngine::solve_ahat_step(const XSeries& a_prefix, const XSeries& b_prefix,
                                   int k) const {
  const BracketEngine& br = mc_.brackets();
  const HodgeEngine& hg = mc_.hodge();
  XSec D = line_defect(a_prefix, b_prefix, k);
  if (D.is_zero()) return XSec(n_);
  XSec nu = br.divide_by_omega(D);
  if (!br.d_L(nu).is_zero())
    throw InvariantBreach("line-defect forcing is not closed");
  XSec H = hg.harmonic(nu);
  if (!H.is_zero()) throw ObstructionNonzero(k, H);
  return Scalar(-1) * hg.d_L_star(hg.green(nu));
}

XSec BihermEngine::gamma_realization(const MatSec& M) const {
  XSec out(n_);
  for (const auto& [k, m] : M.t) {
    ExtFiber f(n_);
    for (int i = 0; i < 2 * n_; ++i)
      for (int j = 0; j < 2 * n_; ++j)
        if (!m(i, j).is_zero())
          f.add_term((Word(1) << i) | (Word(1) << (2 * n_ + j)), m(i, j));
    out.add_term(k, f);
  }
  return out;
}

XSec BihermEngine::solve_gamma_step(const XSeries& a_cand, const XSeries& b_cand,
                                    int k) const {
  GammaMap Gp = gamma_pm(a_cand, b_cand, omega_, J_, +1);
  MatSec M = Gp.S.coeff1(k);
  if (!(M.conj() == M))
    throw InvariantBreach("projection series coefficient is not real");
  XSec g = gamma_realization(Scalar(-1) * M);
  // the adjoint action of the correction must cancel exactly what it targets
  MatSec adg = matsec_block(ad_matsec(g), 0, 0, 2 * n_, 2 * n_);
  if (!(adg + M == MatSec(n_, 2 * n_, 2 * n_)))
    throw InvariantBreach("correction realization does not match its adjoint");
  return g;
}

GKDeformationState BihermEngine::figure1_loop(const XSec& beta, int N) const {
  const BracketEngine& br = mc_.brackets();
  GKDeformationState st;
  st.n = n_;
  st.N = N;
  st.omega = omega_;
  st.J = J_;
  st.eps = st.a_hat = st.b_hat = st.gamma = st.a = st.b = zero_xseries(n_, N);

  XSec lr(n_);
  if (!beta.is_zero()) {
    lr = br.lrep_of(beta);
    for (const auto& [k, f] : lr.t) {
      (void)k;
      for (const auto& [w, c] : f.c) {
        (void)c;
        if (word_deg(w) != 2 || (w >> n_) != 0)
          throw InvariantBreach("deformation direction is not a (2,0)-bivector");
      }
    }
    if (!br.d_L(lr).is_zero())
      throw InvariantBreach("deformation direction is not holomorphic");
    if (!br.schouten(lr, lr).is_zero())
      throw InvariantBreach("deformation direction is not Poisson");
  }

  MatSec JM = MatSec::constant(n_, J_);
  for (int k = 1; k <= N; ++k) {
    XSec eps_k = (k == 1) ? lr : solve_ahat_step(st.a, st.b, k);
    XSec mu = br.lrep_expand(eps_k);
    XSec ahat_k = mu + mu.conj();
    st.eps.set(MIdx{k}, eps_k);
    st.a_hat.set(MIdx{k}, ahat_k);

    XSeries a_cand = st.a;
    a_cand.set(MIdx{k}, ahat_k);
    if (!line_defect(a_cand, st.b, k).is_zero())
      throw InvariantBreach("order-k line defect survives the Green step");

    XSec bhat_k = gk_.solve_b_step(a_cand, st.b, k);
    st.b_hat.set(MIdx{k}, bhat_k);
    XSeries b_cand = st.b;
    b_cand.set(MIdx{k}, bhat_k);

    XSec gam_k = solve_gamma_step(a_cand, b_cand, k);
    st.gamma.set(MIdx{k}, gam_k);
    st.a.set(MIdx{k}, ahat_k + gam_k);
    if (!line_defect(st.a, st.b, k).is_zero())
      throw InvariantBreach("correction term disturbs the line condition");

    XSec b_k = gk_.solve_b_step(st.a, st.b, k);
    st.b.set(MIdx{k}, b_k);

    // what is left of the order-k projection coefficient commutes with J
    GammaMap Gfin = gamma_pm(st.a, st.b, omega_, J_, +1);
    MatSec Gk = Gfin.S.coeff1(k);
    if (!(convolve_mat(Gk, JM) == convolve_mat(JM, Gk)))
      throw InvariantBreach("projection coefficient does not commute with J");
  }
  return st;
}

BihermitianResult BihermEngine::extract_bihermitian(const GKDeformationState& st) const {
  const int N = st.N;
  const int twon = 2 * n_;
  BihermitianResult out;
  out.n = n_;
  out.N = N;

  GammaMap Gp = gamma_pm(st.a, st.b, omega_, J_, +1);
  GammaMap Gm = gamma_pm(st.a, st.b, omega_, J_, -1);
  MSeries Jser = mseries_const(n_, J_, N);
  out.J_plus = mseries_mul(mseries_mul(Gp.S, Jser), mseries_inverse(Gp.S));
  out.J_minus = mseries_mul(mseries_mul(Gm.S, Jser), mseries_inverse(Gm.S));
  if (!mseries_is_real(out.J_plus) || !mseries_is_real(out.J_minus))
    throw InvariantBreach("complex structure series is not real");
  MSeries minus_id = mseries_const(n_, Scalar(-1) * Mat::id(twon), N);
  if (!(mseries_mul(out.J_plus, out.J_plus) == minus_id) ||
      !(mseries_mul(out.J_minus, out.J_minus) == minus_id))
    throw InvariantBreach("complex structure series does not square to -1");
  out.j_plus_fixed = (out.J_plus == Jser);

  // flowed generalized structures and their product
  MSeries Ad = ad_exp_product(st.a, st.b, n_);
  MSeries AdInv = mseries_inverse(Ad);
  MSeries JJt = mseries_mul(mseries_mul(Ad, mseries_const(n_, gk_.quad().JJ, N)), AdInv);
  MSeries Jpsit =
      mseries_mul(mseries_mul(Ad, mseries_const(n_, gk_.quad().Jpsi, N)), AdInv);
  MSeries Pm = mseries_mul(JJt, Jpsit);

  // the metric block sits in the positive-definite branch of -+ (J_t J_psi_t)
  std::string minors_report;
  for (int s : {+1, -1}) {
    MSeries G = Scalar(-s) * Pm;
    MSeries Hinv = mseries_block(G, 0, twon, twon, twon);
    const MatSec& H0 = Hinv.coeff1(0);
    if (H0.t.size() != 1 || freq_norm2(H0.t.begin()->first) != 0) {
      minors_report += "branch " + std::to_string(s) + ": order-0 block not constant; ";
      continue;
    }
    const Mat& M0 = H0.t.begin()->second;
    bool ok = (M0 == M0.transpose());
    std::string ms;
    if (ok) {
      for (const Scalar& d : leading_minors(M0)) {
        ms += d.str() + " ";
        if (!(d.im == 0 && d.re > 0)) ok = false;
      }
    }
    if (!ok) {
      minors_report += "branch " + std::to_string(s) + ": minors " + ms + "; ";
      continue;
    }
    out.metric_sign = s;
    out.h = mseries_inverse(Hinv);
    out.b_field = Scalar(-1) * mseries_mul(out.h, mseries_block(G, 0, 0, twon, twon));

    // block consistency of the generalized metric decomposition
    MSeries lower =
        out.h - mseries_mul(out.b_field, mseries_mul(Hinv, out.b_field));
    if (!(mseries_block(G, twon, 0, twon, twon) == lower) ||
        !(mseries_block(G, twon, twon, twon, twon) ==
          mseries_mul(out.b_field, Hinv)))
      throw InvariantBreach("generalized metric block decomposition failed");
    if (!mseries_is_real(out.h) || !(mseries_transpose(out.h) == out.h))
      throw InvariantBreach("metric series is not real symmetric");
    if (!mseries_is_real(out.b_field) ||
        !(mseries_transpose(out.b_field) == Scalar(-1) * out.b_field))
      throw InvariantBreach("two-form field series is not real antisymmetric");
    for (const MSeries* Jx : {&out.J_plus, &out.J_minus}) {
      MSeries pulled = mseries_mul(mseries_transpose(*Jx), mseries_mul(out.h, *Jx));
      if (!(pulled == out.h))
        throw InvariantBreach("metric is not invariant under a complex structure");
    }
    return out;
  }
  throw DegenerateMetric("no branch of the structure product has a positive "
                         "definite order-0 metric block: " + minors_report);
}

TSeries<XSec> BihermEngine::dc_two_form(const MSeries& Jser, const MSeries& alpha) const {
  MSeries WA = mseries_mul(mseries_transpose(Jser), mseries_mul(alpha, Jser));
  TSeries<XSec> wf = two_form_series(WA);
  TSeries<XSec> dwf(XSec(n_), 1, wf.trunc());
  for (const auto& [nu, s] : wf.terms()) dwf.set(nu, exterior_d(s));
  // the inverse twist on three-forms is minus the twist itself
  return Scalar(-1) * form_twist(Jser, dwf);
}

TorsionReport BihermEngine::torsion_report(const BihermitianResult& bh) const {
  TorsionReport rep;
  MSeries op = mseries_mul(mseries_transpose(bh.J_plus), bh.h);
  MSeries om = mseries_mul(mseries_transpose(bh.J_minus), bh.h);
  rep.H_plus = Scalar(-1) * dc_two_form(bh.J_plus, op);
  rep.H_minus = dc_two_form(bh.J_minus, om);
  TSeries<XSec> bf = two_form_series(bh.b_field);
  rep.db = TSeries<XSec>(XSec(n_), 1, bf.trunc());
  for (const auto& [nu, s] : bf.terms()) rep.db.set(nu, exterior_d(s));
  rep.plus_matches = (rep.H_plus == rep.db);
  rep.minus_matches = (rep.H_minus == rep.db);
  rep.exact = true;
  const Freq zero(2 * n_, 0);
  for (const auto& [nu, s] : rep.H_minus.terms()) {
    (void)nu;
    if (!s.coeff(zero).is_zero()) rep.exact = false;
  }
  return rep;
}

FirstOrderRow BihermEngine::first_order_check(const GKDeformationState& st,
                                              const BihermitianResult& bh) const {
  const BracketEngine& br = mc_.brackets();
  const int twon = 2 * n_;
  FirstOrderRow row;
  XSec betaR = br.lrep_expand(st.eps.coeff1(1));
  MatSec C = bivector_omega_contract(betaR, omega_);
  MatSec Cb = bivector_omega_contract(betaR.conj(), omega_);
  row.contraction = Scalar(-2) * (C + Cb);
  row.gamma_route = bh.J_minus.coeff1(1);
  row.j_plus_first = bh.J_plus.coeff1(1);
  row.minus_matches = (row.gamma_route == row.contraction);
  row.plus_vanishes = row.j_plus_first.is_zero();

  // tangent class: harmonic part of the contraction, compressed to the
  // (0,1) -> (1,0) block of the complexified tangent bundle
  Mat C0(twon, twon);
  {
    const Freq zero(2 * n_, 0);
    auto it = C.t.find(zero);
    if (it != C.t.end()) C0 = it->second;
  }
  Mat I = Mat::id(twon);
  Mat P10 = Scalar::rat(1, 2) * (I - Scalar::I() * J_);
  Mat P01 = Scalar::rat(1, 2) * (I + Scalar::I() * J_);
  row.ks = P10 * (Scalar(-2) * C0) * P01;
  row.ks_nonzero = !row.ks.is_zero();

  std::ostringstream os;
  os << "first-order check\n";
  os << "  J_minus order 1 (flow):        " << matsec_to_str(row.gamma_route) << "\n";
  os << "  -2(beta.omega + conj):         " << matsec_to_str(row.contraction) << "\n";
  os << "  match: " << (row.minus_matches ? "yes" : "NO") << "\n";
  os << "  J_plus order 1:                " << matsec_to_str(row.j_plus_first)
     << " (vanishes: " << (row.plus_vanishes ? "yes" : "NO") << ")\n";
  os << "  tangent class (0,1)->(1,0):    " << mat_to_str(row.ks)
     << " (nonzero: " << (row.ks_nonzero ? "yes" : "no") << ")\n";
  row.summary = os.str();
  return row;
}

ConditionsReport BihermEngine::check_conditions(const GKDeformationState& st) const {
  ConditionsReport rep;
  rep.all_ok = true;
  XSeries psi = psi_series(st.a, st.b, st.N);
  XSeries dpsi = zero_xseries(n_, st.N);
  for (const auto& [nu, s] : psi.terms()) dpsi.set(nu, exterior_d(s));
  GammaMap Gp = gamma_pm(st.a, st.b, omega_, J_, +1);
  MatSec JM = MatSec::constant(n_, J_);
  for (int i = 1; i <= st.N; ++i) {
    ConditionRow row;
    row.order = i;
    XSec full = line_flow_coeff(st.a, st.b, i);
    row.line_defect_ok = gk_.grading().project(3, full).is_zero();
    row.line_filtration_ok = (full - gk_.grading().project(1, full)).is_zero();
    row.spinor_closed = dpsi.coeff1(i).is_zero();
    MatSec Gk = Gp.S.coeff1(i);
    row.gamma_commutes = (convolve_mat(Gk, JM) == convolve_mat(JM, Gk));
    rep.all_ok = rep.all_ok && row.line_defect_ok && row.line_filtration_ok &&
                 row.spinor_closed && row.gamma_commutes;
    rep.rows.push_back(row);
  }
  return rep;
}

bool BihermEngine::flowed_volume_degree_ok(const GammaMap& G, int upto) const {
  const int N = std::min(upto, G.S.trunc());
  MSeries Ginv = mseries_inverse(G.S);
  TSeries<XSec> om(XSec(n_), 1, N);
  om.set(MIdx{0}, XSec::constant(omega_top(n_)));
  TSeries<XSec> flowed = form_twist(Ginv, om);
  for (int k = 0; k <= N; ++k)
    if (!gk_.grading().project(3, exterior_d(flowed.coeff1(k))).is_zero())
      return false;
  return true;
}

SampleCheck BihermEngine::sample_check(const GKDeformationState& st,
                                       const BihermitianResult& bh, const Scalar& t0,
                                       const Freq& q) const {
  (void)bh;
  SampleCheck sc;
  sc.t0 = t0;
  const int twon = 2 * n_;
  MSeries Ad = ad_exp_product(st.a, st.b, n_);
  Mat A = matsec_eval_quarter(Ad.eval({t0}), q);

  auto side = [&](const std::vector<Vec>& basis, int sign) {
    GammaMap G = gamma_pm(st.a, st.b, omega_, J_, sign);
    Mat P = matsec_eval_quarter(G.S.eval({t0}), q);
    auto Pinv = inverse(P);
    if (!Pinv) return false;
    Mat Jev = P * J_ * (*Pinv);  // exact complex structure at the sample
    Mat cols(twon, n_);
    int c = 0;
    for (const Vec& v : basis) {
      Vec w = A * v;
      // the flowed frame projects to the projection series applied to pi(v)
      Vec pv(twon);
      for (int i = 0; i < twon; ++i) pv[i] = v[i];
      Vec pred = P * pv;
      for (int i = 0; i < twon; ++i)
        if (!(w[i] == pred[i])) return false;
      Vec jt = Jev * pred;
      for (int i = 0; i < twon; ++i)
        if (!(jt[i] == Scalar::I() * pred[i])) return false;
      for (int i = 0; i < twon; ++i) cols(i, c) = pred[i];
      ++c;
    }
    return rank(cols) == n_;
  };
  sc.plus_ok = side(gk_.quad().Lbp, +1);
  sc.minus_ok = side(gk_.quad().Lbm, -1);

  XSec psit = psi_series(st.a, st.b, st.N).eval({t0});
  sc.spinor_closed = exterior_d(psit).is_zero();
  ExtFiber ph = gk_.eval_quarter(psit, q);
  sc.pure = (annihilator_basis(ph).size() == static_cast<size_t>(twon));
  sc.nondegenerate = spinor_nondegenerate(ph);
  return sc;
}

}  // namespace gkd
