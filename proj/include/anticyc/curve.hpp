#pragma once

#include <json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "anticyc/padic.hpp"

namespace anticyc {

/// Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with its
/// conductor split as N = q * M (q the prime inert in K).
struct CurveSpec {
  std::string label;
  std::array<std::int64_t, 5> a{};
  std::int64_t N = 0;
  std::int64_t q = 0;
  std::int64_t M = 1;
  /// Reference traces a_ell, re-derived by point counting when loaded.
  std::map<std::int64_t, std::int64_t> checksums;
  /// L(E/K, 1) = 0 for the fields used with this curve (rank-two rows).
  bool central_value_vanishes = true;
};

/// An admissible (E, p, K) triple.
struct SettingSpec {
  std::int64_t p = 0;
  std::int64_t delta = 0;
  std::int64_t disc_k = 0;  ///< D_K, -delta or -4 delta
  std::int64_t a_p = 0;
  PadicInt alpha;           ///< unit root of X^2 - a_p X + p
};

/// Class-number-one imaginary quadratic discriminants.
inline constexpr std::array<std::int64_t, 9> kHeegnerDiscriminants{-3, -4, -7, -8, -11, -19, -43, -67, -163};

BigInt discriminant(const CurveSpec& e);
BigInt c4_invariant(const CurveSpec& e);

/// a_ell = ell + 1 - #E(F_ell) by enumeration; BadReductionError when ell | N
/// or the model is singular mod ell.
std::int64_t ap_point_count(const CurveSpec& e, std::int64_t ell);

/// Field discriminant of Q(sqrt(-delta)); ValidationError unless delta is a
/// positive squarefree integer.
std::int64_t field_discriminant(std::int64_t delta);

/// Checks every hypothesis on (E, p, delta) and lifts alpha_p to precision prec.
SettingSpec validate_setting(const CurveSpec& e, std::int64_t p, std::int64_t delta, int prec);

/// Structural checks on a registry entry (N = qM squarefree, q prime, q not
/// dividing M, nonzero discriminant with support in N, checksums).
void check_curve(const CurveSpec& e);

CurveSpec curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CurveSpec& e);

class CurveRegistry {
 public:
  static CurveRegistry load(const std::filesystem::path& path);
  /// Registry shipped under data/, or ANTICYC_DATA_DIR when set.
  static CurveRegistry load_default();

  const CurveSpec& find(const std::string& label) const;
  const std::vector<CurveSpec>& curves() const { return curves_; }

 private:
  std::vector<CurveSpec> curves_;
};

/// Directory holding curves.json and tables.json.
std::filesystem::path data_dir();

}  // namespace anticyc
