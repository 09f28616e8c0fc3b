// Foundation layer: exact scalars, exact linear algebra, exterior words,
// pairings, frames.  Expected values in these tests were computed by hand
// (determinants, products, contraction signs) before the implementation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gkd/exterior.hpp"
#include "gkd/frames.hpp"
#include "gkd/linalg.hpp"
#include "gkd/scalar.hpp"

using namespace gkd;

TEST_CASE("gaussian rational arithmetic") {
  Scalar a = Scalar::gauss(3, 4, 1, 2);  // 3/4 + i/2
  Scalar b = Scalar::gauss(-2, 1, 1, 1); // -2 + i
  Scalar p = a * b;
  CHECK(p == Scalar::gauss(-2, 1, -1, 4));  // hand product
  CHECK(p / b == a);
  CHECK(p / a == b);
  Scalar z = Scalar::gauss(3, 1, 4, 1);
  CHECK(z.norm2() == mpq_class(25));
  CHECK(z * z.conj() == Scalar(mpq_class(25)));
  CHECK(ipow(5) == Scalar::I());
  CHECK(ipow(-1) == -Scalar::I());
  CHECK(ipow(2) == Scalar(-1));
  CHECK((Scalar::I() * Scalar::I()) == Scalar(-1));
}

TEST_CASE("determinant, inverse, solve, kernel") {
  Mat A(2, 2);
  A(0, 0) = Scalar(1); A(0, 1) = Scalar(2);
  A(1, 0) = Scalar(3); A(1, 1) = Scalar(4);
  CHECK(det(A) == Scalar(-2));

  Mat C(3, 3);
  C(0, 0) = Scalar::I(); C(0, 1) = Scalar(2); C(0, 2) = Scalar(0);
  C(1, 0) = Scalar(1);   C(1, 1) = Scalar::gauss(1, 1, 1, 1); C(1, 2) = Scalar(3);
  C(2, 0) = Scalar(0);   C(2, 1) = Scalar(5); C(2, 2) = Scalar::rat(1, 7);
  auto Ci = inverse(C);
  REQUIRE(Ci.has_value());
  CHECK((*Ci) * C == Mat::id(3));
  CHECK(C * (*Ci) == Mat::id(3));

  Vec b = {Scalar(1), Scalar(0), Scalar::I()};
  auto sol = solve(C, b);
  REQUIRE(sol.ok);
  CHECK(C * sol.x == b);

  Mat K(1, 3);
  K(0, 0) = Scalar(1); K(0, 1) = Scalar(2); K(0, 2) = Scalar(3);
  auto kb = kernel_basis(K);
  CHECK(kb.size() == 2);
  for (const auto& v : kb) {
    Vec r = K * v;
    CHECK(r[0].is_zero());
  }
  CHECK(rank(K) == 1);

  // inconsistent system
  Mat S(2, 1);
  S(0, 0) = Scalar(1);
  S(1, 0) = Scalar(1);
  CHECK_FALSE(solve(S, {Scalar(1), Scalar(2)}).ok);

  Mat H(2, 2);
  H(0, 0) = Scalar(2); H(0, 1) = Scalar(1);
  H(1, 0) = Scalar(1); H(1, 1) = Scalar(2);
  auto mins = leading_minors(H);
  CHECK(mins[0] == Scalar(2));
  CHECK(mins[1] == Scalar(3));

  Factor F(C);
  CHECK(F.rank() == 3);
  auto s2 = F.solve(b);
  REQUIRE(s2.ok);
  CHECK(s2.x == sol.x);
}

TEST_CASE("wedge words and signs") {
  CHECK(merge_sign(0b01, 0b10) == 1);
  CHECK(merge_sign(0b10, 0b01) == -1);
  int n = 2;
  ExtFiber dx1 = ExtFiber::form(n, 0), dx2 = ExtFiber::form(n, 1);
  CHECK(wedge(dx1, dx2) == -wedge(dx2, dx1));
  CHECK(wedge(dx1, dx1).is_zero());
  // associativity on a mixed sum
  ExtFiber a = dx1 + ExtFiber::vec(n, 0);
  ExtFiber b = dx2 - Scalar::I() * ExtFiber::vec(n, 1);
  ExtFiber c = ExtFiber::form(n, 2) + ExtFiber::unit(n);
  CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
}

TEST_CASE("canonical pairing and clifford square") {
  int n = 1;
  ExtFiber d1 = ExtFiber::vec(n, 0), x1 = ExtFiber::form(n, 0);
  CHECK(ext_pair(d1, x1) == Scalar(1));
  CHECK(pair1(d1, x1) == Scalar::rat(1, 2));
  CHECK(pair1(d1, d1).is_zero());
  ExtFiber u = d1 + x1;
  CHECK(pair1(u, u) == Scalar(1));
  // spin square acts as <u,u> = 1
  ExtFiber phi = ExtFiber::form(n, 1) + ExtFiber::unit(n);
  CHECK(spin1(u, spin1(u, phi)) == phi);

  // hand determinant with letters in written order:
  // <d1 ^ dx2, dx1 ^ d2> = det[[2<d1,dx1>, 2<d1,d2>], [2<dx2,dx1>, 2<dx2,d2>]]
  //                      = det[[1,0],[0,1]] = 1
  int n2 = 2;
  ExtFiber w1 = wedge(ExtFiber::vec(n2, 0), ExtFiber::form(n2, 1));
  ExtFiber w2 = wedge(ExtFiber::form(n2, 0), ExtFiber::vec(n2, 1));
  CHECK(ext_pair(w1, w2) == Scalar(1));
  // symmetry, and antisymmetry under swapping letters of one slot
  CHECK(ext_pair(w2, w1) == Scalar(1));
  CHECK(ext_pair(w1, wedge(ExtFiber::vec(n2, 1), ExtFiber::form(n2, 0))) ==
        Scalar(-1));
}

TEST_CASE("frames: duality and coefficient extraction") {
  for (int n : {1, 2, 3}) {
    Frame LB = lbar_frame(n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        Scalar want = (i == j) ? Scalar(1) : Scalar(0);
        CHECK(ext_pair(LB.letters[i], LB.duals[j]) == want);
      }
  }
  // round trip through coefficients for a mixed wedge^2 Lbar element (n = 2)
  Frame LB = lbar_frame(2);
  ExtFiber mu = wedge(LB.letters[0], LB.letters[1])             // u1 ^ u2
                + Scalar::gauss(1, 1, 1, 1) * LB.letters[2]     // (1+i) v1
                + Scalar::rat(-2, 3) * wedge(LB.letters[2], LB.letters[3]);
  auto cs = LB.coeffs(mu);
  CHECK(LB.expand(cs) == mu);
  CHECK(cs.at(0b0011) == Scalar(1));
  CHECK(cs.at(0b0100) == Scalar::gauss(1, 1, 1, 1));
  CHECK(cs.at(0b1100) == Scalar::rat(-2, 3));
  CHECK(LB.contains(mu));
  CHECK_FALSE(LB.contains(dz(2, 0)));  // dz_1 lies in L, not Lbar
}

TEST_CASE("canonical spinors and annihilators") {
  for (int n : {1, 2}) {
    ExtFiber Om = omega_top(n);
    // L = span{d/dzbar_j, dz_j} annihilates Omega
    for (int j = 0; j < n; ++j) {
      CHECK(spin1(del_zbar(n, j), Om).is_zero());
      CHECK(spin1(dz(n, j), Om).is_zero());
      CHECK_FALSE(spin1(del_z(n, j), Om).is_zero());
    }
    // psi_0 = e^{i omega_0} is annihilated by X - i iota_X omega_0
    Mat om = omega_std(n);
    ExtFiber psi = psi0_spinor(n, om);
    ExtFiber omf = two_form(n, om);
    for (int k = 0; k < 2 * n; ++k) {
      ExtFiber X = ExtFiber::vec(n, k);
      ExtFiber iXom(n);
      for (const auto& [w, s] : spin1(X, omf).c) iXom.add_term(w, s);
      ExtFiber ann = X - Scalar::I() * iXom;
      CHECK(spin1(ann, psi).is_zero());
    }
  }
  // top term of e^{omega_0} for n = 2 is dx1^dx2^dx3^dx4 with coefficient 1
  ExtFiber e = exp_two_form(two_form(2, omega_std(2)));
  Word top = 0b11110000;  // four covector generators of n = 2
  CHECK(e.coeff(top) == Scalar(1));
  CHECK(e.coeff(0) == Scalar(1));
}

TEST_CASE("gc structures as matrices") {
  for (int n : {1, 2, 3}) {
    Mat J = Jstd(n);
    // J d/dx1 = d/dx2
    Vec e0(2 * n);
    e0[0] = Scalar(1);
    Vec Je0 = J * e0;
    CHECK(Je0[1] == Scalar(1));

    Mat A = gc_of_complex(J);
    Mat B = gc_of_symplectic(omega_std(n));
    Mat I4 = Mat::id(4 * n);
    CHECK(A * A == Scalar(-1) * I4);
    CHECK(B * B == Scalar(-1) * I4);

    // both are orthogonal for the pairing G = [[0, I],[I, 0]]
    Mat G(4 * n, 4 * n);
    for (int k = 0; k < 2 * n; ++k) {
      G(k, 2 * n + k) = Scalar(1);
      G(2 * n + k, k) = Scalar(1);
    }
    CHECK(A.transpose() * G * A == G);
    CHECK(B.transpose() * G * B == G);

    // +i eigenvectors of the complex-structure operator: d/dzbar_j and dz_j
    for (int j = 0; j < n; ++j) {
      Vec vb = to_coords(del_zbar(n, j));
      Vec dzv = to_coords(dz(n, j));
      CHECK(A * vb == Scalar::I() * Mat::id(4 * n) * vb);
      CHECK(A * dzv == Scalar::I() * Mat::id(4 * n) * dzv);
      Vec vz = to_coords(del_z(n, j));
      CHECK(A * vz == Scalar(-1) * Scalar::I() * Mat::id(4 * n) * vz);
    }
  }
}
