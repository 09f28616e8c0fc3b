#include "gkd/mc.hpp"

#include <algorithm>
#include <sstream>

namespace gkd {

namespace {

std::string midx_str(const MIdx& nu) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < nu.size(); ++i) os << (i ? "," : "") << nu[i];
  os << ")";
  return os.str();
}

// every fiber word of a degree-2 deformation section must have degree 2
void check_degree2(const XSec& s, const char* who) {
  for (const auto& [k, f] : s.t) {
    (void)k;
    for (const auto& [w, c] : f.c) {
      (void)c;
      if (word_deg(w) != 2)
        throw InvariantBreach(std::string(who) +
                              ": seed must be a degree-2 section");
    }
  }
}

}  // namespace

ObstructionNonzero::ObstructionNonzero(int k, XSec w)
    : std::runtime_error("Maurer-Cartan obstruction at order " +
                         std::to_string(k) +
                         ": harmonic part of the bracket is nonzero"),
      order(k),
      witness(std::move(w)) {}

mpq_class MCEngine::sobolev2(const XSec& s, int s_index) const {
  mpq_class total = 0;
  for (const auto& [k, f] : s.t) {
    mpq_class w = 1;
    mpq_class base = 1 + mpq_class(freq_norm2(k));
    for (int i = 0; i < s_index; ++i) w *= base;
    Scalar h = hg_.herm_fiber(f, f);
    assert(h.im == 0);
    total += w * h.re;
  }
  return total;
}

XSec MCEngine::bracket_term(const XSeries& prefix, int k) const {
  XSec B(n_);
  for (int i = 1; i < k; ++i) {
    const XSec& a = prefix.coeff1(i);
    const XSec& b = prefix.coeff1(k - i);
    if (a.is_zero() || b.is_zero()) continue;
    B += br_.schouten(a, b);
  }
  return B;
}

XSec MCEngine::mc_step(const XSeries& prefix, int k) const {
  XSec B = bracket_term(prefix, k);
  if (!br_.d_L(B).is_zero())
    throw InvariantBreach(
        "mc_step: order-" + std::to_string(k) +
        " bracket term is not d_L-closed; the lower-order prefix does not "
        "solve the Maurer-Cartan equations");
  XSec H = hg_.harmonic(B);
  if (!H.is_zero()) throw ObstructionNonzero(k, H);
  return Scalar(mpq_class(-1, 2)) * hg_.d_L_star(hg_.green(B));
}

std::pair<XSeries, ObstructionReport> MCEngine::mc_solve(const XSec& eps1,
                                                         int N) const {
  check_degree2(eps1, "mc_solve");
  ObstructionReport rep;
  rep.seed_dL.push_back(br_.d_L(eps1));
  rep.seeds_closed = rep.seed_dL.back().is_zero();
  if (!rep.seeds_closed)
    throw InvariantBreach("mc_solve: seed is not d_L-closed");
  XSeries eps(XSec(n_), 1, N);
  eps.set(MIdx{1}, eps1);
  for (int k = 2; k <= N; ++k) {
    XSec B = bracket_term(eps, k);
    if (B.is_zero()) continue;  // nothing to check or solve at this order
    if (!br_.d_L(B).is_zero())
      throw InvariantBreach("mc_solve: order-" + std::to_string(k) +
                            " bracket term is not d_L-closed");
    XSec H = hg_.harmonic(B);
    ObstructionRow row;
    row.degree = MIdx{k};
    row.harmonic_part = H;
    Scalar h2 = hg_.l2_pair(H, H);
    row.norm2 = h2.re;
    row.vanishes = H.is_zero();
    rep.rows.push_back(row);
    if (!row.vanishes) throw ObstructionNonzero(k, H);
    eps.set(MIdx{k}, Scalar(mpq_class(-1, 2)) * hg_.d_L_star(hg_.green(B)));
  }
  return {std::move(eps), std::move(rep)};
}

std::pair<XSeries, ObstructionReport> MCEngine::kuranishi(
    const std::vector<XSec>& basis, int N) const {
  const int m = static_cast<int>(basis.size());
  ObstructionReport rep;
  for (const auto& eta : basis) {
    check_degree2(eta, "kuranishi");
    rep.seed_dL.push_back(br_.d_L(eta));
    if (!rep.seed_dL.back().is_zero()) rep.seeds_closed = false;
  }
  XSeries eps(XSec(n_), m, N);
  for (int i = 0; i < m; ++i) {
    MIdx e(m, 0);
    e[i] = 1;
    eps.set(e, basis[i]);
  }
  for (int K = 2; K <= N; ++K) {
    // coefficients at total degree K depend only on lower total degrees
    std::vector<std::pair<MIdx, XSec>> fresh;
    for_each_midx(m, K, [&](const MIdx& nu) {
      XSec B(n_);
      for (const auto& [mu, cmu] : eps.terms()) {
        int tm = midx_total(mu);
        if (tm < 1 || tm > K - 1) continue;
        MIdx rho(m);
        bool ok = true;
        for (int i = 0; i < m; ++i) {
          rho[i] = nu[i] - mu[i];
          if (rho[i] < 0) ok = false;
        }
        if (!ok) continue;
        const XSec& crho = eps.coeff(rho);
        if (crho.is_zero()) continue;
        B += br_.schouten(cmu, crho);
      }
      if (B.is_zero()) return;
      XSec H = hg_.harmonic(B);
      ObstructionRow row;
      row.degree = nu;
      row.harmonic_part = H;
      row.norm2 = hg_.l2_pair(H, H).re;
      row.vanishes = H.is_zero();
      rep.rows.push_back(std::move(row));
      fresh.emplace_back(nu,
                         Scalar(mpq_class(-1, 2)) * hg_.d_L_star(hg_.green(B)));
    });
    for (auto& [nu, v] : fresh) eps.set(nu, std::move(v));
  }
  (void)midx_str;  // naming helper kept for report serialization layers
  return {std::move(eps), std::move(rep)};
}

XSeries MCEngine::mc_residual(const XSeries& eps) const {
  XSeries dl = eps.map([&](const XSec& s) { return br_.d_L(s); });
  XSeries bb = XSeries::combine(
      eps, eps, [&](const XSec& a, const XSec& b) { return br_.schouten(a, b); });
  return dl + Scalar(mpq_class(1, 2)) * bb;
}

mpq_class majorant_M(const MajorantConfig& cfg, int nu) {
  assert(nu >= 1);
  mpq_class p = 1;  // c^{nu-1}
  for (int i = 1; i < nu; ++i) p *= cfg.c;
  return p / (16 * mpq_class(nu) * mpq_class(nu));
}

MajorantConfig MCEngine::default_config(const XSeries& eps, int s_index) const {
  MajorantConfig cfg;
  cfg.s_index = s_index;
  // C1^2: exact per-run bound on the squared Sobolev s-1 -> s operator norm of
  // the Green step d_L* G.  Per frequency the squared operator norm is bounded
  // by the trace of A^adj A in the fiber metric (A = Dstar * Green), and the
  // Sobolev weight shift contributes (1+|k|^2).
  cfg.C1_sq = 0;
  for (const auto& [nu, sec] : eps.terms()) {
    (void)nu;
    for (const auto& [k, f] : sec.t) {
      (void)f;
      const FreqHodge& H = hg_.at(k);
      Mat A = H.Dstar * H.Green;
      mpq_class tr = 0;
      for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) {
          const Scalar& a = A(i, j);
          if (a.is_zero()) continue;
          tr += (hg_.gram_weight(Word(i)) / hg_.gram_weight(Word(j))) *
                (a.re * a.re + a.im * a.im);
        }
      mpq_class bound = (1 + mpq_class(freq_norm2(k))) * tr;
      if (bound > cfg.C1_sq) cfg.C1_sq = bound;
    }
  }
  // smallest power of two c with c^2 > C1^2, i.e. C1 * (1/c) < 1
  cfg.c = 1;
  while (cfg.c * cfg.c <= cfg.C1_sq) cfg.c *= 2;
  cfg.lambda = 1 / cfg.c;
  // empirical per-run constants (squared):
  //   K1^2 = max_k |c_k|_s^2 / M_k^2,
  //   K2^2 = max_k |B_k|_{s-1}^2 / (sum_{i+j=k} M_i M_j)^2.
  cfg.K1_sq = 0;
  cfg.K2_sq = 0;
  if (eps.vars() == 1) {
    for (int k = 1; k <= eps.trunc(); ++k) {
      const XSec& ck = eps.coeff1(k);
      if (ck.is_zero()) continue;
      mpq_class Mk = majorant_M(cfg, k);
      mpq_class r = sobolev2(ck, s_index) / (Mk * Mk);
      if (r > cfg.K1_sq) cfg.K1_sq = r;
    }
    int sm1 = s_index > 0 ? s_index - 1 : 0;
    for (int k = 2; k <= eps.trunc(); ++k) {
      XSec B = bracket_term(eps, k);
      if (B.is_zero()) continue;
      mpq_class conv = 0;
      for (int i = 1; i < k; ++i) conv += majorant_M(cfg, i) * majorant_M(cfg, k - i);
      mpq_class r = sobolev2(B, sm1) / (conv * conv);
      if (r > cfg.K2_sq) cfg.K2_sq = r;
    }
  }
  return cfg;
}

MajorantReport MCEngine::majorant_certify(const XSeries& eps,
                                          const MajorantConfig& cfg) const {
  MajorantReport rep;
  rep.cfg = cfg;
  rep.certified = true;
  for (int k = 1; k <= eps.trunc(); ++k) {
    MajorantRow row;
    row.k = k;
    mpq_class Mk = majorant_M(cfg, k);
    row.norm2 = eps.vars() == 1 ? sobolev2(eps.coeff1(k), cfg.s_index)
                                : mpq_class(0);
    row.bound2 = cfg.K1_sq * Mk * Mk;
    row.norm_ok = row.norm2 <= row.bound2;
    row.conv = 0;
    for (int i = 1; i < k; ++i)
      row.conv += majorant_M(cfg, i) * majorant_M(cfg, k - i);
    row.conv_bound = cfg.lambda * Mk;
    row.conv_ok = row.conv <= row.conv_bound;
    if (!row.norm_ok || !row.conv_ok) rep.certified = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace gkd
