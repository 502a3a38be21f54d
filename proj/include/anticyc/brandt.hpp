#pragma once

#include <map>
#include <optional>
#include <vector>

#include "anticyc/quaternion.hpp"

namespace anticyc {

/// Theta-series fingerprint of a right ideal class: the number of elements
/// x with Nrd(x)/nrd(I) = t for t = 1..len.
using Fingerprint = std::vector<std::int64_t>;

/// Representatives I_1 = R, ..., I_h of the right ideal classes of an
/// Eichler order, with weights w_i = |O_l(I_i)^x| / 2.
struct ClassSet {
  QuatOrder order;
  std::vector<RightIdeal> reps;
  std::vector<std::int64_t> weights;
  std::vector<Fingerprint> fingerprints;
  int fingerprint_length = 10;
  std::int64_t bfs_prime = 0;

  std::size_t size() const { return reps.size(); }
  BigRat mass() const;
};

/// Brandt matrix B(ell): entry (i, j) counts the ell+1 neighbours of I_i
/// (right ideals J in I_i with nrd J = ell nrd I_i) lying in class j.
struct BrandtMatrix {
  std::int64_t ell = 0;
  MatX<std::int64_t> entries;
};

/// Exact Eichler mass (q - 1)/12 * prod_{l | M} (l + 1).
BigRat eichler_mass(std::int64_t q, std::int64_t level);

/// Fingerprint length used for a given reduced discriminant.
int fingerprint_length_for(std::int64_t reduced_disc);
Fingerprint fingerprint(const AlgebraSpec& alg, const RightIdeal& ideal, int length);

/// Returns b with I = b J, if any.
std::optional<QuatElement> is_equivalent(const AlgebraSpec& alg, const RightIdeal& i, const RightIdeal& j);

/// An ideal of small reduced norm in the class of I (integral, inside R).
RightIdeal reduce_representative(const AlgebraSpec& alg, const RightIdeal& ideal);

/// The ell + 1 right sub-ideals of I of reduced norm ell * nrd(I).
std::vector<RightIdeal> neighbors(const QuatOrder& order, const RightIdeal& ideal, std::int64_t ell);

/// Number of units of the left order of I, halved.
std::int64_t unit_weight(const AlgebraSpec& alg, const RightIdeal& ideal);

/// Breadth-first closure from R under ell-neighbours, ell the smallest prime
/// not dividing qM, stopping once the mass formula is met.
ClassSet enumerate_classes(const QuatOrder& order);

/// Index of the class containing `ideal`; InternalError if none matches.
std::size_t classify(const ClassSet& classes, const RightIdeal& ideal);
std::size_t classify(const ClassSet& classes, const RightIdeal& ideal, const Fingerprint& fp);

/// Rows are computed on up to `threads` workers; the result does not depend on it.
BrandtMatrix brandt_matrix(const ClassSet& classes, std::int64_t ell, int threads = 1);

/// Checks row sums, weight-adjointness and integrality; throws ConventionError.
void validate_brandt(const ClassSet& classes, const BrandtMatrix& m);

/// Primitive integer joint eigenvector B(ell) f = a_ell f for the supplied
/// pairs. EigenvalueMismatch when empty, AmbiguousEigenform when the joint
/// eigenspace has dimension >= 2.
VecX<BigInt> eigenfunction(const std::vector<BrandtMatrix>& mats, const std::vector<std::int64_t>& eigs);

}  // namespace anticyc
