#pragma once
// Generalized complex structures on the fiber W = (T + T*) (x) C, represented
// as exact 4n x 4n matrices on generator coordinates, together with the
// spinor-line dictionary (annihilator bundles, purity, nondegeneracy).
//
// Sign convention: the +i eigenbundle of the structure operator is the
// annihilator L of its pure spinor line, i.e.  Jop = i P_L - i P_{Lbar}.

#include <optional>
#include <vector>

#include "gkd/clifford.hpp"
#include "gkd/exterior.hpp"
#include "gkd/frames.hpp"

namespace gkd {

// 2<.,.> as a matrix on generator coordinates
inline Mat pairing_matrix(int n) {
  Mat G(4 * n, 4 * n);
  for (int k = 0; k < 2 * n; ++k) {
    G(k, 2 * n + k) = Scalar(1);
    G(2 * n + k, k) = Scalar(1);
  }
  return G;
}

// annihilator {u in W : u . phi = 0} of a fiber spinor, as degree-one elements
std::vector<ExtFiber> annihilator_basis(const ExtFiber& phi);

struct GCFiber {
  int n = 0;
  Mat J;  // 4n x 4n, J^2 = -1, orthogonal for the pairing

  bool involutive_ok() const {  // J^2 = -1
    return J * J == Scalar(-1) * Mat::id(4 * n);
  }
  bool orthogonal_ok() const {
    Mat G = pairing_matrix(n);
    return J.transpose() * G * J == G;
  }
  Mat proj_plus_i() const {  // P_L = (1 - iJ)/2
    return Scalar::rat(1, 2) * (Mat::id(4 * n) - Scalar::I() * Mat::id(4 * n) * J);
  }
  Mat proj_minus_i() const {
    return Scalar::rat(1, 2) * (Mat::id(4 * n) + Scalar::I() * Mat::id(4 * n) * J);
  }
};

// Build the structure whose +i eigenbundle is the annihilator of phi.
// Requires purity (annihilator of dimension 2n) and L cap conj(L) = 0;
// returns nullopt otherwise.
std::optional<GCFiber> gc_from_spinor(const ExtFiber& phi);

// nondegeneracy of the spinor line: <phi, reversal(conj phi)> != 0 at top degree
inline bool spinor_nondegenerate(const ExtFiber& phi) {
  return !chevalley_pair(phi, phi.conj()).is_zero();
}

}  // namespace gkd
