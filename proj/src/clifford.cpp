#include "gkd/clifford.hpp"

#include <map>
#include <mutex>

namespace gkd {

const std::vector<Mat>& spin_gen_matrices(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Mat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Mat> mats;
  int dim = form_dim(n);
  for (int g = 0; g < 4 * n; ++g) {
    Mat M(dim, dim);
    ExtFiber eg = ExtFiber::term(n, Word(1) << g, Scalar(1));
    for (int col = 0; col < dim; ++col) {
      ExtFiber img = spin1(eg, basis_form(n, Word(col)));
      for (const auto& [w, s] : img.c) M(static_cast<int>(w >> (2 * n)), col) = s;
    }
    mats.push_back(std::move(M));
  }
  return cache.emplace(n, std::move(mats)).first->second;
}

Mat op_of_deg1(const ExtFiber& u) {
  assert(u.is_zero() || u.is_homogeneous(1));
  const auto& gens = spin_gen_matrices(u.n);
  Mat M(form_dim(u.n), form_dim(u.n));
  for (const auto& [w, s] : u.c) M = M + s * gens[__builtin_ctz(w)];
  return M;
}

Mat op_of_cl2(const ExtFiber& W) {
  int n = W.n;
  const auto& gens = spin_gen_matrices(n);
  int dim = form_dim(n);
  Mat M(dim, dim);
  for (const auto& [w, s] : W.c) {
    int d = word_deg(w);
    if (d == 0) {
      M = M + s * Mat::id(dim);
    } else {
      assert(d == 2);
      int i = __builtin_ctz(w);
      int j = __builtin_ctz(w & (w - 1));
      Mat prod = gens[i] * gens[j];
      if (pair2_gen(n, i, j)) prod = prod - Scalar::rat(1, 2) * Mat::id(dim);
      M = M + s * prod;
    }
  }
  return M;
}

ExtFiber ad_cl2(const ExtFiber& W, const ExtFiber& u) {
  assert(u.is_zero() || u.is_homogeneous(1));
  int n = W.n;
  ExtFiber out(n);
  auto dualc = [&](int g) {  // 2<e_g, u> = coefficient of the dual generator in u
    int dg = (g < 2 * n) ? g + 2 * n : g - 2 * n;
    return u.coeff(Word(1) << dg);
  };
  for (const auto& [w, s] : W.c) {
    if (word_deg(w) != 2) continue;  // scalar part is central
    int i = __builtin_ctz(w);
    int j = __builtin_ctz(w & (w - 1));
    Scalar cj = dualc(j), ci = dualc(i);
    if (!cj.is_zero()) out.add_term(Word(1) << i, s * cj);
    if (!ci.is_zero()) out.add_term(Word(1) << j, -(s * ci));
  }
  return out;
}

ExtFiber cl2_bracket(const ExtFiber& W1, const ExtFiber& W2) {
  int n = W1.n ? W1.n : W2.n;
  ExtFiber out(n);
  for (const auto& [w, s] : W2.c) {
    if (word_deg(w) != 2) continue;
    int i = __builtin_ctz(w);
    int j = __builtin_ctz(w & (w - 1));
    ExtFiber ei = ExtFiber::term(n, Word(1) << i, Scalar(1));
    ExtFiber ej = ExtFiber::term(n, Word(1) << j, Scalar(1));
    out += s * (wedge(ad_cl2(W1, ei), ej) + wedge(ei, ad_cl2(W1, ej)));
  }
  return out;
}

Mat ad_matrix_cl2(const ExtFiber& W) {
  int n = W.n;
  Mat M(4 * n, 4 * n);
  for (int g = 0; g < 4 * n; ++g) {
    ExtFiber img = ad_cl2(W, ExtFiber::term(n, Word(1) << g, Scalar(1)));
    for (const auto& [w, s] : img.c) M(__builtin_ctz(w), g) = s;
  }
  return M;
}

ExtFiber endo_to_ttstar(const Mat& A) {
  int n2 = A.rows;  // 2n
  assert(A.cols == n2);
  int n = n2 / 2;
  ExtFiber out(n);
  for (int a = 0; a < n2; ++a)
    for (int b = 0; b < n2; ++b) {
      if (A(a, b).is_zero()) continue;
      // word d/dx^{a+1} ^ dx^{b+1}: generator a then 2n + b (already ascending)
      out.add_term((Word(1) << a) | (Word(1) << (2 * n + b)), A(a, b));
    }
  return out;
}

ExtFiber normal_apply(int n, Word Amask, Word Bmask, const ExtFiber& phi) {
  ExtFiber cur = phi;
  // vector letters act first, rightmost (= highest index) first
  for (int b = 2 * n - 1; b >= 0; --b) {
    if (!(Bmask >> b & 1)) continue;
    cur = interior_gen(b, cur);
    if (cur.is_zero()) return cur;
  }
  return wedge(ExtFiber::term(n, Amask << (2 * n), Scalar(1)), cur);
}

CL2Projection project_CL2(int n, const Mat& M) {
  int nl = 2 * n;
  std::map<std::pair<Word, Word>, Scalar> found;  // (A covmask, B vecmask)
  for (int bsize = 0; bsize <= 2; ++bsize) {
    for (Word B = 0; B < (Word(1) << nl); ++B) {
      if (word_deg(B) != bsize) continue;
      ExtFiber dxB = basis_form(n, B);
      ExtFiber resid = op_apply(M, dxB);
      for (const auto& [ab, cc] : found)
        resid -= cc * normal_apply(n, ab.first, ab.second, dxB);
      if (resid.is_zero()) continue;
      // d/dx^B chain contracts dx^B to a sign
      Scalar sB = normal_apply(n, 0, B, dxB).coeff(0);
      assert(!sB.is_zero());
      for (const auto& [w, s] : resid.c) {
        assert((w & ((Word(1) << nl) - 1)) == 0);  // covector-only residue
        found[{w >> nl, B}] = s / sB;
      }
    }
  }
  // convert normal-ordered coefficients of total degree {0,2} to a q-carrier
  CL2Projection out;
  out.cl2 = ExtFiber(n);
  for (const auto& [ab, cc] : found) {
    auto [A, B] = ab;
    int da = word_deg(A), db = word_deg(B);
    if (da + db == 0) {
      out.cl2.add_term(0, cc);
    } else if (da == 2 && db == 0) {
      out.cl2.add_term(A << nl, cc);
    } else if (da == 0 && db == 2) {
      out.cl2.add_term(B, cc);
    } else if (da == 1 && db == 1) {
      // dx^a . d/dx^b = q(dx^a ^ d/dx^b) + <dx^a, d/dx^b>
      int a = __builtin_ctz(A), b = __builtin_ctz(B);
      out.cl2.add_term((Word(1) << b) | (Word(1) << (nl + a)), -cc);
      if (a == b) out.cl2.add_term(0, Scalar::rat(1, 2) * cc);
    }
    // higher normal-ordered terms are dropped; exactness check below
  }
  out.exact = (op_of_cl2(out.cl2) == M);
  return out;
}

}  // namespace gkd
