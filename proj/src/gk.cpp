#include "gkd/gk.hpp"

#include <algorithm>
#include <set>

#include "gkd/brackets.hpp"

namespace gkd {

MatSec ad_matsec(const XSec& W) {
  MatSec out(W.n, 4 * W.n, 4 * W.n);
  for (const auto& [k, f] : W.t) out.add_term(k, ad_matrix_cl2(f));
  return out;
}

bool in_fiber_span(const std::vector<ExtFiber>& basis, const ExtFiber& f) {
  if (f.is_zero()) return true;
  if (basis.empty()) return false;
  // Dense coordinates over the full word space (mixed vector/covector words),
  // keeping only words that actually occur: fibers here are sparse in 2^{4n}.
  std::set<Word> words;
  for (const auto& g : basis)
    for (const auto& [w, s] : g.c) words.insert(w);
  for (const auto& [w, s] : f.c) words.insert(w);
  std::vector<Word> cols(words.begin(), words.end());
  const int nc = static_cast<int>(cols.size());
  Mat A(static_cast<int>(basis.size()) + 1, nc);
  for (size_t r = 0; r < basis.size(); ++r)
    for (int c = 0; c < nc; ++c) A(static_cast<int>(r), c) = basis[r].coeff(cols[c]);
  for (int c = 0; c < nc; ++c)
    A(static_cast<int>(basis.size()), c) = f.coeff(cols[c]);
  Mat B(static_cast<int>(basis.size()), nc);
  for (int r = 0; r < B.rows; ++r)
    for (int c = 0; c < nc; ++c) B(r, c) = A(r, c);
  return rank(std::move(A)) == rank(std::move(B));
}

// deterministic basis of the column space of a projector: its pivot columns
static std::vector<Vec> column_basis(const Mat& P) {
  Mat R = P;
  std::vector<int> piv = rref(R);
  std::vector<Vec> basis;
  for (int j : piv) {
    Vec v(P.rows);
    for (int r = 0; r < P.rows; ++r) v[r] = P(r, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

QuadFrame quad_frame(int n, const Mat& omega) {
  QuadFrame qf;
  qf.n = n;
  qf.JJ = gc_of_complex(Jstd(n));
  qf.Jpsi = gc_of_symplectic(omega);
  if (!(qf.JJ * qf.Jpsi == qf.Jpsi * qf.JJ))
    throw InvariantBreach("quad_frame: the two structures do not commute");
  GCFiber gJ{n, qf.JJ}, gP{n, qf.Jpsi};
  Mat pJp = gJ.proj_plus_i(), pJm = gJ.proj_minus_i();
  Mat pPp = gP.proj_plus_i(), pPm = gP.proj_minus_i();
  qf.Lp = column_basis(pJp * pPp);
  qf.Lm = column_basis(pJp * pPm);
  qf.Lbm = column_basis(pJm * pPp);
  qf.Lbp = column_basis(pJm * pPm);
  for (const auto* b : {&qf.Lp, &qf.Lm, &qf.Lbp, &qf.Lbm})
    if (static_cast<int>(b->size()) != n)
      throw InvariantBreach("quad_frame: eigenbundle intersection has wrong rank");
  // Clifford products x.y for x in L-, y in Lbar+ reduce to wedges because the
  // pairing between the two factors vanishes (both sit inside Lbar_psi)
  Mat G = pairing_matrix(n);
  auto pair2 = [&](const Vec& x, const Vec& y) {
    Scalar s;
    for (int r = 0; r < G.rows; ++r)
      for (int c = 0; c < G.cols; ++c)
        if (!G(r, c).is_zero()) s += x[r] * G(r, c) * y[c];
    return s;
  };
  for (const Vec& x : qf.Lm)
    for (const Vec& y : qf.Lbp) {
      if (!pair2(x, y).is_zero())
        throw InvariantBreach("quad_frame: mixed factors are not mutually isotropic");
      qf.carriers.push_back(wedge(from_coords(n, x), from_coords(n, y)));
    }
  size_t block = qf.carriers.size();
  for (size_t j = 0; j < block; ++j) qf.carriers.push_back(qf.carriers[j].conj());
  return qf;
}

GKEngine::GKEngine(int n, const Mat& omega)
    : n_(n), omega_(omega), ug_(n), qf_(quad_frame(n, omega)),
      psi0_(XSec::constant(psi0_spinor(n, omega))), lbar_(lbar_frame(n)) {
  GCFiber gJ{n, gc_of_complex(Jstd(n))};
  PL_ = gJ.proj_plus_i();
  PLbar_ = gJ.proj_minus_i();
  for (Word w = 0; w < (Word(1) << (2 * n_)); ++w)
    if (word_deg(w) == 2) mu_words_.push_back(w);
  const int fd = 4 * n_;
  Mat A(fd * fd, static_cast<int>(mu_words_.size()));
  for (size_t j = 0; j < mu_words_.size(); ++j) {
    Mat col = PLbar_ * ad_matrix_cl2(lbar_.word_exp[mu_words_[j]]) * PL_;
    for (int r = 0; r < fd; ++r)
      for (int c = 0; c < fd; ++c)
        A(r * fd + c, static_cast<int>(j)) = col(r, c);
  }
  mu_fac_ = std::make_unique<Factor>(std::move(A));
}

void GKEngine::check_carrier_series(const XSeries& a, bool require_real) const {
  if (!a.coeff(MIdx(a.vars(), 0)).is_zero())
    throw InvariantBreach("deformation series must have zero constant term");
  for (const auto& [nu, v] : a.terms()) {
    if (require_real && !v.is_real())
      throw InvariantBreach("deformation coefficient is not real");
    for (const auto& [k, f] : v.t)
      for (const auto& [w, s] : f.c)
        if (word_deg(w) != 2 && word_deg(w) != 0)
          throw InvariantBreach("deformation coefficient is not a CL2 carrier");
  }
}

XSeries GKEngine::exp_apply(const XSeries& a, const XSeries& target, int sign) const {
  if (!a.coeff(MIdx(a.vars(), 0)).is_zero())
    throw InvariantBreach("exp_apply requires zero constant term");
  XSeries acc = target, cur = target;
  int N = std::min(a.trunc(), target.trunc());
  for (int j = 1; j <= N; ++j) {
    cur = Scalar::rat(sign, j) *
          XSeries::combine(a, cur, [](const XSec& w, const XSec& p) {
            return cl2_apply(w, p);
          });
    if (cur.is_zero()) break;
    acc += cur;
  }
  return acc;
}

XSec GKEngine::conjugated_d_coeff(const XSeries& a, int k) const {
  assert(a.vars() == 1);
  check_carrier_series(a, true);
  XSeries om(XSec(n_), 1, k);
  om.set(MIdx{0}, XSec::constant(omega_top(n_)));
  XSeries psi = exp_apply(a, om, +1);
  XSeries dpsi = psi.map([](const XSec& s) { return exterior_d(s); });
  XSeries D = exp_apply(a, dpsi, -1);
  return D.coeff1(k);
}

XSec GKEngine::integrability_defect(const XSeries& a, int k) const {
  return ug_.project(3, conjugated_d_coeff(a, k));
}

XSeries GKEngine::match_eigenflow(const XSeries& src, int N, int direction) const {
  const int m = src.vars();
  const int fd = 4 * n_;
  // ambient CL2 series of both sides; the unknown side fills in order by order
  XSeries eps_amb(XSec(n_), m, N), a_amb(XSec(n_), m, N), out(XSec(n_), m, N);
  for (const auto& [nu, v] : src.terms()) {
    if (midx_total(nu) > N) continue;
    if (direction > 0) {  // src is the Lbar-bivector series in word representation
      XSec amb(n_);
      for (const auto& [k, f] : v.t) {
        ExtFiber e(n_);
        for (const auto& [w, s] : f.c) e += s * lbar_.word_exp[w];
        amb.add_term(k, e);
      }
      eps_amb.set(nu, amb);
    } else {
      a_amb.set(nu, v);
    }
  }
  if (direction < 0) check_carrier_series(a_amb, true);
  const MatSec one = MatSec::constant(n_, Mat::id(fd));
  for (int K = 1; K <= N; ++K) {
    MSeries Me(MatSec(n_, fd, fd), m, K), Ma(MatSec(n_, fd, fd), m, K);
    for (const auto& [nu, v] : eps_amb.terms())
      if (midx_total(nu) <= K) Me.add(nu, Scalar(-1) * ad_matsec(v));
    for (const auto& [nu, v] : a_amb.terms())
      if (midx_total(nu) <= K) Ma.add(nu, ad_matsec(v));
    MSeries R = MSeries::combine(series_exp(Me, one, convolve_mat),
                                 series_exp(Ma, one, convolve_mat), convolve_mat);
    for_each_midx(m, K, [&](const MIdx& nu) {
      XSec unknown(n_);  // mu_nu (direction > 0) or eps_nu (direction < 0)
      for (const auto& [f, Mf] : R.coeff(nu).t) {
        Mat block = PLbar_ * Mf * PL_;
        if (block.is_zero()) continue;
        Vec rhs(static_cast<size_t>(fd) * fd);
        for (int r = 0; r < fd; ++r)
          for (int c = 0; c < fd; ++c)
            rhs[static_cast<size_t>(r) * fd + c] =
                direction > 0 ? -block(r, c) : block(r, c);
        SolveResult sol = mu_fac_->solve(rhs);
        if (!sol.ok)
          throw NoSolution(K, XSec(n_),
                           "eigenbundle matching: order has no bivector solution");
        ExtFiber mu(n_);
        for (size_t j = 0; j < mu_words_.size(); ++j)
          mu += sol.x[j] * lbar_.word_exp[mu_words_[j]];
        unknown.add_term(f, mu);
      }
      if (direction > 0) {
        XSec a_nu = unknown + unknown.conj();
        a_amb.set(nu, a_nu);
        out.set(nu, a_nu);
      } else {
        eps_amb.set(nu, unknown);
        XSec lrep(n_);  // back to the Lbar word representation
        for (const auto& [k, f] : unknown.t) {
          ExtFiber lw(n_);
          for (const auto& [w, s] : lbar_.coeffs(f)) lw.add_term(w, s);
          ExtFiber chk(n_);  // the solution lives in wedge^2 Lbar by construction
          for (const auto& [w, s] : lw.c) chk += s * lbar_.word_exp[w];
          if (!(chk == f))
            throw InvariantBreach("eigenbundle matching: solution left wedge^2 Lbar");
          lrep.add_term(k, lw);
        }
        out.set(nu, lrep);
      }
    });
  }
  return out;
}

XSeries GKEngine::realify(const XSeries& eps, int N) const {
  return match_eigenflow(eps, N, +1);
}
XSeries GKEngine::complexify(const XSeries& a, int N) const {
  return match_eigenflow(a, N, -1);
}

XSec GKEngine::solve_b_step(const XSeries& a, const XSeries& b_prefix, int k) const {
  assert(a.vars() == 1 && b_prefix.vars() == 1 && k >= 1);
  check_carrier_series(a, true);
  check_carrier_series(b_prefix, true);
  for (const auto& [nu, v] : b_prefix.terms()) {
    if (nu[0] >= k) throw InvariantBreach("solve_b_step: prefix reaches order k");
    for (const auto& [f, fib] : v.t)
      if (!quad_member(qf_, fib))
        throw InvariantBreach("solve_b_step: prefix leaves the quadratic bundle");
  }
  XSeries psi_t(XSec(n_), 1, k);
  psi_t.set(MIdx{0}, psi0_);
  XSeries full = exp_apply(a, exp_apply(b_prefix, psi_t, +1), +1);
  XSeries dfull = full.map([](const XSec& s) { return exterior_d(s); });
  for (int i = 0; i < k; ++i)
    if (!dfull.coeff1(i).is_zero())
      throw InvariantBreach("solve_b_step: prefix does not close the lower orders");
  XSec R = -dfull.coeff1(k);  // want d(b_k . psi0) = R

  const auto& C = qf_.carriers;
  const int nc = static_cast<int>(C.size());
  const int wd = form_dim(n_);
  const ExtFiber p0 = psi0_.coeff(Freq(2 * n_, 0));
  std::vector<ExtFiber> act(nc);  // frequency-independent carrier actions
  for (int j = 0; j < nc; ++j) act[j] = cl2_apply_fiber(C[j], p0);
  auto sigma = [&](int j) { return (j + nc / 2) % nc; };

  XSec b(n_);
  std::set<Freq> done;
  for (const auto& [f0, rf] : R.t) {
    (void)rf;
    if (done.count(f0)) continue;
    Freq g0 = freq_neg(f0);
    done.insert(f0);
    done.insert(g0);
    ExtFiber Rf = R.coeff(f0), Rg = R.coeff(g0);
    if (f0 == g0) {  // zero frequency: d contributes nothing, forcing must vanish
      if (!Rf.is_zero())
        throw NoSolution(k, XSec::mono(f0, Rf),
                         "solve_b_step: constant forcing term is unbalanced");
      continue;
    }
    // real-split linear system: unknowns re/im of the carrier coefficients at
    // f0; the fiber at g0 = -f0 is forced by reality of b
    Mat A(4 * wd, 2 * nc);
    Vec rhs(static_cast<size_t>(4) * wd);
    for (int j = 0; j < nc; ++j) {
      ExtFiber Ef = wedge(d_symbol(n_, f0), act[j]);
      ExtFiber Eg = wedge(d_symbol(n_, g0), act[sigma(j)]);
      for (Word w = 0; w < static_cast<Word>(wd); ++w) {
        Word fw = w << (2 * n_);  // form words live on the covector bits
        Scalar al = Ef.coeff(fw);  // linear in c_j
        if (!al.is_zero()) {
          A(2 * static_cast<int>(w) + 0, 2 * j + 0) += Scalar(al.re);
          A(2 * static_cast<int>(w) + 0, 2 * j + 1) += Scalar(-al.im);
          A(2 * static_cast<int>(w) + 1, 2 * j + 0) += Scalar(al.im);
          A(2 * static_cast<int>(w) + 1, 2 * j + 1) += Scalar(al.re);
        }
        Scalar be = Eg.coeff(fw);  // conjugate-linear in c_j
        if (!be.is_zero()) {
          int r0 = 2 * wd + 2 * static_cast<int>(w);
          A(r0 + 0, 2 * j + 0) += Scalar(be.re);
          A(r0 + 0, 2 * j + 1) += Scalar(be.im);
          A(r0 + 1, 2 * j + 0) += Scalar(be.im);
          A(r0 + 1, 2 * j + 1) += Scalar(-be.re);
        }
      }
    }
    for (Word w = 0; w < static_cast<Word>(wd); ++w) {
      Scalar rf_w = Rf.coeff(w << (2 * n_)), rg_w = Rg.coeff(w << (2 * n_));
      rhs[2 * w + 0] = Scalar(rf_w.re);
      rhs[2 * w + 1] = Scalar(rf_w.im);
      rhs[2 * wd + 2 * w + 0] = Scalar(rg_w.re);
      rhs[2 * wd + 2 * w + 1] = Scalar(rg_w.im);
    }
    SolveResult sol = solve(A, rhs);
    if (!sol.ok) {
      // exact least-squares residual: the component of the forcing that no
      // quad-bundle section can balance
      Mat At = A.transpose();
      SolveResult y = solve(At * A, At * rhs);
      assert(y.ok);
      Vec res = rhs;
      Vec Ay = A * y.x;
      for (size_t i = 0; i < res.size(); ++i) res[i] -= Ay[i];
      ExtFiber wf(n_), wg(n_);
      for (Word w = 0; w < static_cast<Word>(wd); ++w) {
        Word fw = w << (2 * n_);
        wf.add_term(fw, res[2 * w] + Scalar::I() * res[2 * w + 1]);
        wg.add_term(fw, res[2 * wd + 2 * w] + Scalar::I() * res[2 * wd + 2 * w + 1]);
      }
      XSec witness = XSec::mono(f0, wf) + XSec::mono(g0, wg);
      throw NoSolution(k, witness, "solve_b_step: forcing term is unbalanced");
    }
    // minimum-norm representative: project off the kernel of A
    std::vector<Vec> ker = kernel_basis(A);
    if (!ker.empty()) {
      int kd = static_cast<int>(ker.size());
      Mat K(2 * nc, kd);
      for (int j = 0; j < kd; ++j)
        for (int r = 0; r < 2 * nc; ++r) K(r, j) = ker[j][r];
      Mat Kt = K.transpose();
      auto Gi = inverse(Kt * K);
      assert(Gi.has_value());
      Vec corr = K * (*Gi * (Kt * sol.x));
      for (size_t i = 0; i < sol.x.size(); ++i) sol.x[i] -= corr[i];
    }
    ExtFiber bf(n_);
    for (int j = 0; j < nc; ++j) {
      Scalar cj = sol.x[2 * j] + Scalar::I() * sol.x[2 * j + 1];
      bf += cj * C[j];
    }
    b.add_term(f0, bf);
    b.add_term(g0, bf.conj());
  }
  // the quadratic bundle commutes with the complex structure: check exactly
  for (const auto& [f, fib] : b.t)
    if (!(ad_matrix_cl2(fib) * qf_.JJ == qf_.JJ * ad_matrix_cl2(fib)))
      throw InvariantBreach("solve_b_step: output does not commute with J");
  return b;
}

XSeries GKEngine::solve_b(const XSeries& a, int N) const {
  XSeries b(XSec(n_), 1, N);
  for (int k = 1; k <= N; ++k) b.set(MIdx{k}, solve_b_step(a, b, k));
  return b;
}

ExtFiber GKEngine::eval_quarter(const XSec& s, const Freq& q) const {
  assert(q.size() == static_cast<size_t>(2 * n_));
  ExtFiber out(n_);
  for (const auto& [k, f] : s.t) {
    long e = 0;
    for (size_t j = 0; j < q.size(); ++j) e += static_cast<long>(k[j]) * q[j];
    e = ((e % 4) + 4) % 4;
    static const int re[4] = {1, 0, -1, 0}, im[4] = {0, 1, 0, -1};
    out += Scalar::gauss(re[e], 1, im[e], 1) * f;
  }
  return out;
}

GCFiber GKEngine::gc_at_quarter(const XSec& psi, const Freq& q) const {
  ExtFiber f = eval_quarter(psi, q);
  if (!spinor_nondegenerate(f)) throw Degenerate();
  auto gc = gc_from_spinor(f);
  if (!gc) throw NotPure();
  return *gc;
}

}  // namespace gkd
