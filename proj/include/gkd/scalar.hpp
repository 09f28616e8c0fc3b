#pragma once
// Exact Gaussian-rational scalar: a + b*i with a, b in Q (GMP-backed).
// Every computation in the engine runs over this field; there is no floating
// point anywhere in the core.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace gkd {

struct Scalar {
  mpq_class re, im;

  Scalar() : re(0), im(0) {}
  Scalar(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  // mpq_class built from a (num, den) pair is not canonical until
  // canonicalize(); GMP comparisons assume canonical form, so normalize at
  // the boundary.
  Scalar(mpq_class r) : re(std::move(r)), im(0) { re.canonicalize(); }
  Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static Scalar rat(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
  }
  static Scalar I() { return Scalar(mpq_class(0), mpq_class(1)); }
  // r + s*i for rational r=rn/rd, s=sn/sd
  static Scalar gauss(long rn, long rd, long sn, long sd) {
    mpq_class r(rn, rd), s(sn, sd);
    r.canonicalize();
    s.canonicalize();
    return Scalar(r, s);
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Scalar conj() const { return Scalar(re, -im); }
  // |z|^2 as a rational
  mpq_class norm2() const { return re * re + im * im; }

  Scalar operator-() const { return Scalar(-re, -im); }
  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    mpq_class d = o.norm2();
    mpq_class r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string str() const {
    std::string s = re.get_str();
    if (im != 0) {
      s += (im > 0 ? "+" : "") + im.get_str() + "i";
    }
    return s;
  }
};

inline Scalar conj(const Scalar& z) { return z.conj(); }

// i^k for integer k (possibly negative)
inline Scalar ipow(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Scalar(1);
    case 1: return Scalar::I();
    case 2: return Scalar(-1);
    default: return -Scalar::I();
  }
}

}  // namespace gkd
