#include <gtest/gtest.h>

#include <cmath>

#include "anticyc/curve.hpp"

using namespace anticyc;

namespace {

CurveSpec make_curve(std::array<std::int64_t, 5> a, std::int64_t n, std::int64_t q) {
  CurveSpec e;
  e.label = "test";
  e.a = a;
  e.N = n;
  e.q = q;
  e.M = n / q;
  return e;
}

// a_ell = ell + 1 - #E(F_ell), counting affine solutions directly.
std::int64_t naive_ap(const CurveSpec& e, std::int64_t ell) {
  auto [a1, a2, a3, a4, a6] = e.a;
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < ell; ++x)
    for (std::int64_t y = 0; y < ell; ++y) {
      const std::int64_t lhs = y * y + a1 * x * y + a3 * y;
      const std::int64_t rhs = x * x * x + a2 * x * x + a4 * x + a6;
      if (((lhs - rhs) % ell + ell) % ell == 0) ++count;
    }
  return ell + 1 - count;
}

}  // namespace

TEST(Curve, DiscriminantOfElevenA) {
  CurveSpec e = make_curve({0, -1, 1, -10, -20}, 11, 11);
  EXPECT_EQ(discriminant(e), BigInt(-161051));
  EXPECT_EQ(c4_invariant(e), BigInt(496));
}

TEST(Curve, PointCountMatchesNaiveCount) {
  const auto reg = CurveRegistry::load_default();
  for (const auto& e : reg.curves()) {
    for (std::int64_t ell : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) {
      if (e.N % ell == 0) continue;
      const std::int64_t ap = ap_point_count(e, ell);
      EXPECT_EQ(ap, naive_ap(e, ell)) << e.label << " ell=" << ell;
      EXPECT_LE(static_cast<double>(ap * ap), 4.0 * static_cast<double>(ell)) << "Hasse bound";
    }
  }
}

TEST(Curve, BadPrimeRejected) {
  CurveSpec e = make_curve({0, -1, 1, -10, -20}, 11, 11);
  EXPECT_THROW(ap_point_count(e, 11), BadReductionError);
}

TEST(Curve, FieldDiscriminants) {
  EXPECT_EQ(field_discriminant(1), -4);
  EXPECT_EQ(field_discriminant(2), -8);
  EXPECT_EQ(field_discriminant(3), -3);
  EXPECT_EQ(field_discriminant(19), -19);
  EXPECT_THROW(field_discriminant(4), ValidationError);
  EXPECT_THROW(field_discriminant(0), ValidationError);
}

TEST(Registry, LoadsAllTableCurves) {
  const auto reg = CurveRegistry::load_default();
  EXPECT_EQ(reg.curves().size(), 21u);
  for (const auto& e : reg.curves()) {
    EXPECT_EQ(e.q * e.M, e.N);
    EXPECT_TRUE(is_prime(e.q));
    EXPECT_NO_THROW(check_curve(e));
  }
  EXPECT_EQ(reg.find("563a1").q, 563);
  EXPECT_EQ(reg.find("446c1").q, 2);
  EXPECT_THROW(reg.find("11a1"), UnknownCurveError);
}

TEST(Registry, ChecksumMismatchRejected) {
  CurveSpec e = CurveRegistry::load_default().find("563a1");
  e.checksums.begin()->second += 1;
  EXPECT_THROW(check_curve(e), ConfigError);
  CurveSpec f = CurveRegistry::load_default().find("563a1");
  f.N = 2 * 563;
  f.M = 2;
  EXPECT_THROW(check_curve(f), ConfigError);
}

TEST(Registry, JsonRoundTrip) {
  const CurveSpec& e = CurveRegistry::load_default().find("1034a1");
  CurveSpec back = curve_from_json(to_json(e));
  EXPECT_EQ(to_json(back), to_json(e));
}

TEST(Setting, UnitRootSolvesFrobeniusPolynomial) {
  const CurveSpec& e = CurveRegistry::load_default().find("563a1");
  SettingSpec s = validate_setting(e, 5, 1, 10);
  EXPECT_EQ(s.a_p, -4);
  EXPECT_EQ(s.disc_k, -4);
  PadicInt x = s.alpha;
  EXPECT_TRUE((x * x - PadicInt(5, 10, BigInt(s.a_p)) * x + PadicInt(5, 10, BigInt(5))).residue().is_zero());
}

TEST(Setting, ErrorFamilies) {
  const auto reg = CurveRegistry::load_default();
  // Delta = 5 is not a class-number-one field.
  EXPECT_THROW(validate_setting(reg.find("389a1"), 11, 5, 6), ClassNumberError);
  EXPECT_THROW(validate_setting(reg.find("563a1"), 3, 1, 6), ValidationError);
  EXPECT_THROW(validate_setting(reg.find("563a1"), 9, 1, 6), ValidationError);
  // 389 = 1 mod 4 splits in Q(i).
  EXPECT_THROW(validate_setting(reg.find("389a1"), 5, 1, 6), NotInertError);
  // 7 is inert in Q(i).
  EXPECT_THROW(validate_setting(reg.find("563a1"), 7, 1, 6), NotSplitError);
  // 223 splits in Q(sqrt(-3)) but p = 2 is excluded; p = 223 divides N.
  EXPECT_THROW(validate_setting(reg.find("446c1"), 223, 3, 6), BadReductionError);
}

TEST(Setting, SupersingularAndLevelSplitErrors) {
  // 11a1 has a_5 = 1, a_19 = 0: supersingular at 19.
  CurveSpec e = make_curve({0, -1, 1, -10, -20}, 11, 11);
  EXPECT_EQ(ap_point_count(e, 19), 0);
  EXPECT_THROW(validate_setting(e, 19, 2, 6), SupersingularError);
  // 718b1 has q = 2 inert in Q(sqrt(-3)), but 359 = 2 mod 3 is inert too.
  const CurveSpec& f = CurveRegistry::load_default().find("718b1");
  EXPECT_THROW(validate_setting(f, 7, 3, 6), BadLevelSplitError);
}
