#pragma once

#include <json.hpp>

#include "anticyc/lattice.hpp"
#include "anticyc/types.hpp"

namespace anticyc {

/// The algebra (a, b / Q) with basis 1, i, j, k: i^2 = a, j^2 = b, k = ij = -ji.
/// Both a and b are negative, so the norm form is positive definite.
struct AlgebraSpec {
  std::int64_t a = -1;
  std::int64_t b = -1;
  std::int64_t q = 2;  ///< the finite ramified prime

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

/// Quaternion coordinates (x0, x1, x2, x3) for x0 + x1 i + x2 j + x3 k.
using QuatElement = RatVec4;

template <typename Scalar>
Vec4<Scalar> quat_mul(const AlgebraSpec& alg, const Vec4<Scalar>& x, const Vec4<Scalar>& y) {
  const Scalar a(alg.a), b(alg.b);
  Vec4<Scalar> z;
  z(0) = x(0) * y(0) + a * x(1) * y(1) + b * x(2) * y(2) - a * b * x(3) * y(3);
  z(1) = x(0) * y(1) + x(1) * y(0) - b * x(2) * y(3) + b * x(3) * y(2);
  z(2) = x(0) * y(2) + x(2) * y(0) + a * x(1) * y(3) - a * x(3) * y(1);
  z(3) = x(0) * y(3) + x(3) * y(0) + x(1) * y(2) - x(2) * y(1);
  return z;
}

template <typename Scalar>
Vec4<Scalar> quat_conj(const Vec4<Scalar>& x) {
  return Vec4<Scalar>(x(0), -x(1), -x(2), -x(3));
}

template <typename Scalar>
Scalar quat_nrd(const AlgebraSpec& alg, const Vec4<Scalar>& x) {
  const Scalar a(alg.a), b(alg.b);
  return x(0) * x(0) - a * x(1) * x(1) - b * x(2) * x(2) + a * b * x(3) * x(3);
}

template <typename Scalar>
Scalar quat_trd(const Vec4<Scalar>& x) {
  return 2 * x(0);
}

/// Trd(x * conj(y)); the polar form of Nrd.
template <typename Scalar>
Scalar quat_pair(const AlgebraSpec& alg, const Vec4<Scalar>& x, const Vec4<Scalar>& y) {
  const Scalar a(alg.a), b(alg.b);
  return 2 * (x(0) * y(0) - a * x(1) * y(1) - b * x(2) * y(2) + a * b * x(3) * y(3));
}

/// Full-rank Z-lattice in B: the row span of basis / denom, with basis in
/// Hermite normal form and gcd(content(basis), denom) = 1. Equal lattices
/// have equal representations.
struct QuatLattice {
  IntMat4 basis = IntMat4::Identity();
  BigInt denom = 1;

  static QuatLattice from_generators(const MatX4<BigInt>& gens, const BigInt& denom);
  static QuatLattice from_rational(const RatMat4& rows);

  RatMat4 rational_basis() const;
  QuatElement element(int i) const;
  bool contains(const QuatElement& x) const;
  /// Coordinates of x in this basis (rational; integral iff contained).
  RatVec4 coordinates(const QuatElement& x) const;
  bool contains_lattice(const QuatLattice& other) const;
  /// Covolume relative to Z<1,i,j,k>.
  BigRat covolume() const;
  QuatLattice scaled(const BigRat& c) const;

  friend bool operator==(const QuatLattice&, const QuatLattice&) = default;
};

/// Order of B together with its level; reduced discriminant is q * level.
struct QuatOrder {
  AlgebraSpec algebra;
  QuatLattice lattice;
  std::int64_t level = 1;

  std::int64_t reduced_discriminant() const { return algebra.q * level; }
};

/// Right ideal of a fixed order; nrd is the reduced norm.
struct RightIdeal {
  QuatLattice lattice;
  BigRat nrd = 1;

  friend bool operator==(const RightIdeal& a, const RightIdeal& b) { return a.lattice == b.lattice; }
};

/// Classical Hilbert symbol (a, b)_v over Q_v; v = 0 denotes the real place.
int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t v);

AlgebraSpec build_algebra(std::int64_t q);
QuatOrder maximal_order(const AlgebraSpec& alg);
QuatOrder eichler_order(const QuatOrder& maximal, std::int64_t level);

/// Reduced discriminant computed from the trace form: sqrt |det Trd(b_i conj b_j)|.
BigRat reduced_discriminant(const AlgebraSpec& alg, const QuatLattice& lat);
/// True when every basis product lies in the lattice and 1 is contained.
bool is_order(const AlgebraSpec& alg, const QuatLattice& lat);

QuatLattice lattice_product(const AlgebraSpec& alg, const QuatLattice& x, const QuatLattice& y);
QuatLattice lattice_conjugate(const QuatLattice& x);
/// Positive generator of the fractional ideal generated by Nrd(L).
BigRat lattice_nrd(const AlgebraSpec& alg, const QuatLattice& x);

RightIdeal ideal_product(const AlgebraSpec& alg, const RightIdeal& i, const RightIdeal& j);
RightIdeal ideal_conjugate(const RightIdeal& i);
BigRat ideal_nrd(const AlgebraSpec& alg, const RightIdeal& i);
RightIdeal make_ideal(const AlgebraSpec& alg, const QuatLattice& lat);
/// x * L for an element x.
QuatLattice left_multiply(const AlgebraSpec& alg, const QuatElement& x, const QuatLattice& lat);
/// The principal right ideal x * R.
RightIdeal principal_ideal(const QuatOrder& order, const QuatElement& x);
/// Left order I * conj(I) / nrd(I) of an invertible ideal.
QuatLattice left_order(const AlgebraSpec& alg, const RightIdeal& i);
QuatLattice right_order(const AlgebraSpec& alg, const RightIdeal& i);

/// Even integral Gram matrix of x -> Nrd(x) / nrd on the given basis rows:
/// entries Trd(b_i conj b_j) / nrd, so v^T G v = 2 Nrd(v) / nrd.
IntMat4 normalized_gram(const AlgebraSpec& alg, const QuatLattice& lat, const BigRat& nrd);

nlohmann::json to_json(const QuatLattice& lat);
QuatLattice quat_lattice_from_json(const nlohmann::json& j);

}  // namespace anticyc
