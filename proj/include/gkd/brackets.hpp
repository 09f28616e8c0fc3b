#pragma once
// Schouten bracket and algebroid differential on sections of wedge^* Lbar over
// the flat torus, where Lbar = span{ u_j = d/dz_j, v_j = dzbar_j }.
//
// Elements of wedge^* Lbar are held in LETTER representation ("lrep"): an
// ExtFiber whose words are masks over the 2n Lbar letters (bit j = u_j,
// bit n+j = v_j).  Only wedge/add are meaningful on lreps; conversion to the
// real generator representation goes through the Frame tables.
//
// The bracket uses the derived-bracket normalization: [x, y]_S is the
// operator [[del, x.], y.] (graded commutators) acting on the canonical
// line, an element of wedge^{p+q-1} Lbar.  Its relation set is
//   symmetry   [x,y] = (-1)^{pq} [y,x]
//   Leibniz    d_L[x,y] = [d_L x, y] + (-1)^p [x, d_L y]
//   Jacobi     sum_cyc (-1)^{p1 p3} [[x1,x2],x3] = 0
// (p, q the Lbar degrees).  It is computed by two structurally independent
// routes:
//   direct  - recursive application of the graded Leibniz/anchor axioms
//             with the anchor pi(u_j) = d/dz_j, pi(v_j) = 0 and vanishing
//             frame brackets (flat torus), then the sign conversion from the
//             classical Schouten-Nijenhuis normalization;
//   spinor  - the derived-bracket operator [[del, x.], y.] applied to the
//             canonical spinor Omega, pulled back through the isomorphism
//             mu -> mu . Omega onto the canonical line.
// schouten() always runs both and raises InvariantBreach on disagreement.

#include <stdexcept>
#include <string>

#include "gkd/calculus.hpp"
#include "gkd/frames.hpp"
#include "gkd/section.hpp"

namespace gkd {

struct InvariantBreach : std::runtime_error {
  explicit InvariantBreach(const std::string& what) : std::runtime_error(what) {}
};

class BracketEngine {
 public:
  explicit BracketEngine(int n);

  int n() const { return n_; }
  const Frame& lbar() const { return LB_; }
  const Frame& lframe() const { return L_; }
  const Frame& forms() const { return FF_; }

  // ---- representation plumbing ----
  ExtFiber lrep_expand_fiber(const ExtFiber& lw) const;
  ExtFiber lrep_of_fiber(const ExtFiber& real) const;  // InvariantBreach if outside
  XSec lrep_expand(const XSec& s) const;
  XSec lrep_of(const XSec& s) const;

  // spin action of an lrep word / section on forms
  ExtFiber lbar_word_apply_fiber(Word lmask, const ExtFiber& phi) const;
  XSec lbar_apply(const XSec& lsec, const XSec& form) const;

  // ---- algebroid differential on lrep sections ----
  // d_L(f e_A) = sum_j (Dzbar_j f) v_j ^ e_A  per frequency
  XSec d_L(const XSec& lsec) const;

  // ---- Schouten bracket on lrep sections ----
  XSec schouten_direct(const XSec& x, const XSec& y) const;
  XSec schouten_spinor(const XSec& x, const XSec& y) const;
  XSec schouten(const XSec& x, const XSec& y) const;  // both + cross-check

  // derived-bracket operator [[del, x.], y.] applied to a form section
  XSec derived_double(const XSec& x, const XSec& y, const XSec& phi) const;

  // invert mu . Omega = rhs on the canonical line (rhs must be in the image)
  XSec divide_by_omega(const XSec& rhs) const;

 private:
  int n_;
  Frame LB_, L_, FF_;
  // mu . Omega sends the lbar word A to sign * (a single complex form word)
  struct OmegaImage {
    Word form_word;
    Scalar coeff;
  };
  std::vector<OmegaImage> omega_img_;            // by lbar mask
  std::map<Word, std::pair<Word, Scalar>> omega_inv_;  // form word -> (mask, 1/coeff)

  Scalar anchor(int letter, const Freq& k) const;  // pi(letter) on e^{ikx}
  ExtFiber g_bracket_word(const Freq& kg, Word A) const;  // [g, e_A]
  ExtFiber word_bracket(const Freq& kf, Word A, const Freq& kg, Word B) const;
};

}  // namespace gkd
