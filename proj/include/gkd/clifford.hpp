#pragma once
// Clifford algebra CL(W) of the canonical pairing, acting on forms through the
// spin representation.  Forms are indexed by covector-letter masks (dimension
// 2^{2n}); operators are dense exact matrices in that basis.
//
// Degree <= 2 Clifford elements ("CL2 carriers") are stored as exterior
// ExtFiber elements of degree {0, 2} with antisymmetrized-product semantics:
// a degree-2 word u^v stands for q(u^v) = u.v - <u,v>.  This matches the
// classical identification so(W) = wedge^2 W.

#include <utility>
#include <vector>

#include "gkd/exterior.hpp"
#include "gkd/frames.hpp"

namespace gkd {

// ---- form basis <-> dense vectors -------------------------------------------
inline int form_dim(int n) { return 1 << (2 * n); }

inline Vec form_to_vec(const ExtFiber& phi) {
  Vec v(form_dim(phi.n));
  for (const auto& [w, s] : phi.c) {
    assert((w & ((Word(1) << (2 * phi.n)) - 1)) == 0);
    v[w >> (2 * phi.n)] = s;
  }
  return v;
}
inline ExtFiber vec_to_form(int n, const Vec& v) {
  ExtFiber f(n);
  for (size_t m = 0; m < v.size(); ++m)
    f.add_term(Word(m) << (2 * n), v[m]);
  return f;
}
inline ExtFiber basis_form(int n, Word covmask) {  // dx-word from a 2n-bit mask
  return ExtFiber::term(n, covmask << (2 * n), Scalar(1));
}

// spin matrices of the 4n real generators (cached per n)
const std::vector<Mat>& spin_gen_matrices(int n);

// operator of a degree-one element
Mat op_of_deg1(const ExtFiber& u);

// operator of a CL2 carrier (scalar part + antisymmetrized degree-2 words)
Mat op_of_cl2(const ExtFiber& W);

// apply a dense spin operator to a form
inline ExtFiber op_apply(const Mat& M, const ExtFiber& phi) {
  return vec_to_form(phi.n, M * form_to_vec(phi));
}

// ---- adjoint action of CL2 on W ----------------------------------------------
// [q(e_i ^ e_j), u] = 2<e_j, u> e_i - 2<e_i, u> e_j  (degree-one output)
ExtFiber ad_cl2(const ExtFiber& W, const ExtFiber& u);

// commutator of CL2 carriers, again a CL2 carrier (scalar part drops:
// [A, q(u^v)] = q([A,u] ^ v + u ^ [A,v]))
ExtFiber cl2_bracket(const ExtFiber& W1, const ExtFiber& W2);

// adjoint action as a 4n x 4n matrix on generator coordinates
Mat ad_matrix_cl2(const ExtFiber& W);

// gl(T) embedding: A |-> sum_{a,b} A_ab q(d/dx^a ^ dx^b); acts as A on vectors
// and -A^T on covectors.
ExtFiber endo_to_ttstar(const Mat& A);

// ---- normal-ordered extraction ------------------------------------------------
// Action of the normal-ordered monomial (dx^A ascending).(d/dx^B ascending) on
// a form; rightmost Clifford factor acts first.
ExtFiber normal_apply(int n, Word Amask, Word Bmask, const ExtFiber& phi);

struct CL2Projection {
  ExtFiber cl2;   // carrier with q-semantics
  bool exact;     // true if the operator IS the carrier's operator
};

// Triangular extraction of the degree <= 2 part of a spin operator.
CL2Projection project_CL2(int n, const Mat& M);

// ---- spinor pairing ------------------------------------------------------------
// reversal antiautomorphism on a p-form: sign (-1)^{p(p-1)/2}
inline ExtFiber reversal(const ExtFiber& phi) {
  ExtFiber out(phi.n);
  for (const auto& [w, s] : phi.c) {
    int p = word_deg(w);
    int e = (p * (p - 1) / 2) % 2;
    out.add_term(w, e ? -s : s);
  }
  return out;
}

// top-degree coefficient of phi ^ reversal(psi) (the bilinear spinor pairing,
// up to the harmless overall orientation constant)
inline Scalar chevalley_pair(const ExtFiber& phi, const ExtFiber& psi) {
  ExtFiber w = wedge(phi, reversal(psi));
  Word top = ((Word(1) << (2 * phi.n)) - 1) << (2 * phi.n);
  return w.coeff(top);
}

}  // namespace gkd
