#pragma once

#include <vector>

#include "anticyc/types.hpp"

namespace anticyc {

/// Determinant by fraction-exact Gaussian elimination (field scalars only).
template <typename Scalar, int R, int C>
Scalar determinant_exact(Eigen::Matrix<Scalar, R, C> m) {
  const Eigen::Index n = m.rows();
  Scalar det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      m.row(c).swap(m.row(piv));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Scalar f = m(r, c) / m(c, c);
      m.row(r) -= f * m.row(c);
    }
  }
  return det;
}

/// Basis of the right kernel {x : m x = 0} over Q, one vector per free column.
MatX<BigRat> kernel_rational(MatX<BigRat> m);

/// Basis of the right kernel of m over F_p, entries in [0, p).
std::vector<std::vector<std::int64_t>> nullspace_mod(const MatX<std::int64_t>& m, std::int64_t p);

/// Scale a rational vector to a primitive integer vector (content 1) whose
/// first nonzero entry is positive.
VecX<BigInt> primitive_integer_vector(const VecX<BigRat>& v);

}  // namespace anticyc
