#include "gkd/gcs.hpp"

namespace gkd {

std::vector<ExtFiber> annihilator_basis(const ExtFiber& phi) {
  int n = phi.n;
  int dim = form_dim(n);
  Mat M(dim, 4 * n);  // column g = e_g . phi in form coordinates
  for (int g = 0; g < 4 * n; ++g) {
    ExtFiber img = spin1(ExtFiber::term(n, Word(1) << g, Scalar(1)), phi);
    for (const auto& [w, s] : img.c) M(static_cast<int>(w >> (2 * n)), g) = s;
  }
  std::vector<ExtFiber> out;
  for (const auto& v : kernel_basis(std::move(M))) out.push_back(from_coords(n, v));
  return out;
}

std::optional<GCFiber> gc_from_spinor(const ExtFiber& phi) {
  int n = phi.n;
  auto ann = annihilator_basis(phi);
  if (static_cast<int>(ann.size()) != 2 * n) return std::nullopt;  // not pure
  Mat U(4 * n, 4 * n);
  for (int c = 0; c < 2 * n; ++c) {
    Vec v = to_coords(ann[c]);
    Vec vb = to_coords(ann[c].conj());
    for (int r = 0; r < 4 * n; ++r) {
      U(r, c) = v[r];
      U(r, 2 * n + c) = vb[r];
    }
  }
  auto Uinv = inverse(U);
  if (!Uinv.has_value()) return std::nullopt;  // L cap conj(L) != 0
  Mat D(4 * n, 4 * n);
  for (int k = 0; k < 2 * n; ++k) {
    D(k, k) = Scalar::I();
    D(2 * n + k, 2 * n + k) = -Scalar::I();
  }
  GCFiber out;
  out.n = n;
  out.J = U * D * (*Uinv);
  return out;
}

}  // namespace gkd
