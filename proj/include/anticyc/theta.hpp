#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "anticyc/gross.hpp"
#include "anticyc/padic.hpp"

namespace anticyc {

/// Regularization of the Gross-point sum attached to (1+T)^i, with
/// b = a u^i running over a in mu_{p-1}:
///  kStandard:  alpha^{-(n+1)} (f(Q_{n+1}^b) - alpha^{-1} f(Q_n^b))
///  kDisplayed: alpha^{-(n+1)} (alpha f(Q_n^b) - f(Q_{n+1}^b))
/// Both are divided by u_K = |O_K^x| / 2, the number of times each Galois
/// orbit point occurs in the mu_{p-1} sum.
enum class ThetaFormula { kStandard, kDisplayed };

std::string to_string(ThetaFormula f);
ThetaFormula theta_formula_from_string(const std::string& s);

/// Everything theta_element needs about one (E, p, K) setting.
struct ThetaContext {
  std::string label;
  std::int64_t p = 0;
  std::int64_t delta = 0;
  PadicInt alpha;
  std::int64_t units_k = 1;  ///< u_K
  VecX<BigInt> f;
  GrossClassifier* classifier = nullptr;
  ThetaFormula formula = ThetaFormula::kStandard;
  int threads = 1;
};

/// |O_K^x| / 2 for a class-number-one discriminant.
std::int64_t half_unit_count(std::int64_t disc_k);

struct ThetaElement {
  std::string label;
  std::int64_t p = 0;
  std::int64_t delta = 0;
  int n = 0;
  int m = 0;
  int k = 0;
  GroupPoly group;   ///< exact coefficients in (Z/p^prec)[Gamma_n]
  TruncPoly series;  ///< expansion mod (p^m, T^k)
  OrderAndLeading lead;
};

/// Theta_{E/K,n}(T) mod (p^m, T^k). Needs ctx.alpha.prec() >= m and a
/// splitting precise enough for level n + 1 points.
ThetaElement theta_element(const ThetaContext& ctx, int n, int m, int k);

/// Theta_n(0), the augmentation of the group element, reduced mod p^{prec - guard};
/// OracleFailure unless it vanishes.
BigInt trivial_zero_check(const ThetaElement& th, int guard);

/// Theta_n reduced to Gamma_{n-1} equals Theta_{n-1}, at the shared precision.
bool consistency_check(const ThetaElement& th_n, const ThetaElement& th_prev);

struct OrbitWitness {
  int sign = 1;
  std::int64_t shift = 0;
  int involution = 0;
};

/// Searches sign * (1+T)^s * iota^e (f) = ref over sign = +-1, e in {0, 1},
/// s in [0, p^n).
std::optional<OrbitWitness> orbit_match(const TruncPoly& f, const TruncPoly& ref, int n);

/// Diagnostic only: the least unit c in [1, p^m) with c * f in the orbit of
/// ref. Detects references whose eigenform carries a different unit scalar.
std::optional<std::pair<BigInt, OrbitWitness>> unit_scalar_match(const TruncPoly& f, const TruncPoly& ref, int n);

struct Verdict {
  std::optional<int> rho;
  BigInt leading = 0;
  BigInt leading_derivative = 0;
  bool low_terms_vanish = false;  ///< c_0 = c_1 = 0 mod p^m
  bool criterion = false;         ///< rho == 2 with vanishing c_0, c_1
  std::string note;
};

Verdict report_criterion(const ThetaElement& th);

nlohmann::json to_json(const OrbitWitness& w);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const ThetaElement& th);

}  // namespace anticyc
