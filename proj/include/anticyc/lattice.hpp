#pragma once

#include <vector>

#include "anticyc/types.hpp"

namespace anticyc {

/// Row-style Hermite normal form of the integer row span of `generators`.
/// Pivots are positive and entries above a pivot lie in [0, pivot).
/// Throws RankError unless the span has full rank 4.
IntMat4 hnf(const MatX4<BigInt>& generators);

/// Rational front end: the lattice spanned by the rows of `basis`, where
/// `scale * basis` is integral.
RatMat4 hnf(const RatMat4& basis, const BigInt& scale);

/// Generalized index [L1 : L2] = covol(L2) / covol(L1) for full-rank
/// lattices given by row bases.
BigRat lattice_index(const RatMat4& l1, const RatMat4& l2);

/// Symmetric exact-rational quadratic form v -> v^T G v.
struct GramForm {
  RatMat4 matrix;

  BigRat value(const IntVec4& v) const;
  bool is_positive_definite() const;
};

/// Integral LLL on a Gram matrix. Returns the unimodular U whose rows are
/// the reduced basis in the original coordinates; the reduced Gram is
/// U * gram * U^T.
IntMat4 lll_gram(const IntMat4& gram);

/// All integer vectors v with v^T G v <= bound (v and -v both listed, the
/// zero vector included). Complete by construction: bounds are derived from
/// exact Schur complements, never from floating point.
std::vector<IntVec4> short_vectors(const GramForm& form, const BigRat& bound);

/// #{v in Z^4 : v^T G v = value}.
std::int64_t count_by_value(const GramForm& form, const BigRat& value);

/// Integer-matrix core of short_vectors. `gram` must be positive definite;
/// returns vectors with v^T gram v <= bound in the coordinates of `gram`.
std::vector<Vec4<std::int64_t>> enumerate_integral(const IntMat4& gram, const BigInt& bound);

/// Theta-series coefficients #{v : v^T gram v = 2t} for t = 0..max_t of an
/// even integral positive-definite form (gram assumed LLL-reduced for speed).
std::vector<std::int64_t> theta_series_even(const IntMat4& gram, int max_t);

}  // namespace anticyc
