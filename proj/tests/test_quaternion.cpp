#include <gtest/gtest.h>

#include <random>

#include "anticyc/quaternion.hpp"

using namespace anticyc;

namespace {

const std::vector<std::int64_t> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 37, 43, 389, 563, 1913};

QuatElement random_element(std::mt19937_64& rng, const QuatOrder& o) {
  std::uniform_int_distribution<int> d(-5, 5);
  IntVec4 c(d(rng), d(rng), d(rng), d(rng));
  RowVec4<BigInt> x = c.transpose() * o.lattice.basis;
  QuatElement e;
  for (int i = 0; i < 4; ++i) e(i) = BigRat(x(i), o.lattice.denom);
  return e;
}

}  // namespace

TEST(Hilbert, ProductFormula) {
  for (std::int64_t a : {-1, -2, -3, 5, 6, -11, 15}) {
    for (std::int64_t b : {-1, -3, 7, -10, 13, -19}) {
      int prod = hilbert_symbol(a, b, 0);
      for (std::int64_t v : {2, 3, 5, 7, 11, 13, 17, 19}) prod *= hilbert_symbol(a, b, v);
      EXPECT_EQ(prod, 1) << a << "," << b;
    }
  }
}

TEST(Algebra, RamifiedExactlyAtQAndInfinity) {
  for (std::int64_t q : kPrimes) {
    AlgebraSpec alg = build_algebra(q);
    EXPECT_LT(alg.a, 0);
    EXPECT_LT(alg.b, 0);
    EXPECT_EQ(hilbert_symbol(alg.a, alg.b, 0), -1);
    for (std::int64_t v : prime_factors(std::abs(2 * alg.a * alg.b)))
      EXPECT_EQ(hilbert_symbol(alg.a, alg.b, v), v == q ? -1 : 1) << "q=" << q << " v=" << v;
  }
  EXPECT_EQ(build_algebra(2), (AlgebraSpec{-1, -1, 2}));
}

TEST(Algebra, MultiplicationIsAssociativeAndNormMultiplicative) {
  std::mt19937_64 rng(9);
  AlgebraSpec alg = build_algebra(563);
  QuatOrder o = maximal_order(alg);
  for (int t = 0; t < 30; ++t) {
    QuatElement x = random_element(rng, o), y = random_element(rng, o), z = random_element(rng, o);
    EXPECT_EQ(quat_mul<BigRat>(alg, quat_mul<BigRat>(alg, x, y), z), quat_mul<BigRat>(alg, x, quat_mul<BigRat>(alg, y, z)));
    EXPECT_EQ(quat_nrd<BigRat>(alg, quat_mul<BigRat>(alg, x, y)), quat_nrd<BigRat>(alg, x) * quat_nrd<BigRat>(alg, y));
  }
}

TEST(MaximalOrder, DiscriminantIsQ) {
  for (std::int64_t q : kPrimes) {
    QuatOrder o = maximal_order(build_algebra(q));
    EXPECT_TRUE(is_order(o.algebra, o.lattice));
    EXPECT_EQ(reduced_discriminant(o.algebra, o.lattice), BigRat(q));
  }
}

TEST(EichlerOrder, DiscriminantIsQM) {
  struct Case {
    std::int64_t q, level;
  };
  for (auto [q, level] : {Case{2, 223}, Case{2, 359}, Case{2, 517}, Case{11, 3}, Case{3, 35}, Case{13, 6}}) {
    QuatOrder o = eichler_order(maximal_order(build_algebra(q)), level);
    EXPECT_TRUE(is_order(o.algebra, o.lattice));
    EXPECT_EQ(reduced_discriminant(o.algebra, o.lattice), BigRat(q * level));
    EXPECT_EQ(o.reduced_discriminant(), q * level);
  }
  EXPECT_THROW(eichler_order(maximal_order(build_algebra(11)), 4), ConstructionError);
  EXPECT_THROW(eichler_order(maximal_order(build_algebra(11)), 22), ConstructionError);
}

TEST(Ideals, PrincipalIdealNormAndOrders) {
  std::mt19937_64 rng(4);
  QuatOrder o = eichler_order(maximal_order(build_algebra(2)), 223);
  for (int t = 0; t < 10; ++t) {
    QuatElement x = random_element(rng, o);
    if (x.isZero()) continue;
    RightIdeal i = principal_ideal(o, x);
    EXPECT_EQ(ideal_nrd(o.algebra, i), quat_nrd<BigRat>(o.algebra, x));
    EXPECT_EQ(right_order(o.algebra, i), o.lattice);
    EXPECT_TRUE(is_order(o.algebra, left_order(o.algebra, i)));
  }
}

TEST(Ideals, LeftOrderOfPrincipalIdealIsConjugateOrder) {
  std::mt19937_64 rng(5);
  QuatOrder o = maximal_order(build_algebra(37));
  for (int t = 0; t < 5; ++t) {
    QuatElement x = random_element(rng, o);
    if (x.isZero()) continue;
    RightIdeal i = principal_ideal(o, x);
    QuatLattice ol = left_order(o.algebra, i);
    const QuatElement x_inv = quat_conj<BigRat>(x) / quat_nrd<BigRat>(o.algebra, x);
    for (int k = 0; k < 4; ++k)
      EXPECT_TRUE(ol.contains(quat_mul<BigRat>(o.algebra, quat_mul<BigRat>(o.algebra, x, o.lattice.element(k)), x_inv)));
    EXPECT_EQ(reduced_discriminant(o.algebra, ol), BigRat(37));
  }
}

TEST(Lattice, JsonRoundTrip) {
  QuatOrder o = eichler_order(maximal_order(build_algebra(13)), 6);
  EXPECT_EQ(quat_lattice_from_json(to_json(o.lattice)), o.lattice);
}

TEST(Lattice, ContainsAndCoordinates) {
  QuatOrder o = maximal_order(build_algebra(11));
  for (int i = 0; i < 4; ++i) {
    QuatElement b = o.lattice.element(i);
    EXPECT_TRUE(o.lattice.contains(b));
    RatVec4 c = o.lattice.coordinates(b);
    for (int j = 0; j < 4; ++j) EXPECT_EQ(c(j), BigRat(i == j ? 1 : 0));
  }
  QuatElement half = QuatElement::Zero();
  half(1) = BigRat(1, 3);
  EXPECT_FALSE(o.lattice.contains(half));
}
