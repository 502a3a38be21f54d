#pragma once

#include <json.hpp>

#include <optional>
#include <vector>

#include "anticyc/types.hpp"

namespace anticyc {

/// Element of Z/p^prec, carried with its prime and precision.
class PadicInt {
 public:
  PadicInt() = default;
  PadicInt(std::int64_t p, int prec, const BigInt& value);

  std::int64_t p() const { return p_; }
  int prec() const { return prec_; }
  const BigInt& residue() const { return residue_; }
  BigInt modulus() const { return ipow(BigInt(p_), static_cast<unsigned>(prec_)); }

  bool is_unit() const { return residue_ % p_ != 0; }
  /// Reduces to a lower precision; raises PrecisionError when asked to grow.
  PadicInt with_prec(int prec) const;
  PadicInt inverse() const;
  PadicInt pow(std::int64_t e) const;

  friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator*(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator-(const PadicInt& a);
  friend bool operator==(const PadicInt& a, const PadicInt& b);

 private:
  std::int64_t p_ = 0;
  int prec_ = 0;
  BigInt residue_ = 0;
};

/// Class in (Z/p^m)[T]/(T^k).
class TruncPoly {
 public:
  TruncPoly() = default;
  TruncPoly(std::int64_t p, int m, int k);
  TruncPoly(std::int64_t p, int m, int k, std::vector<BigInt> coeffs);

  static TruncPoly one(std::int64_t p, int m, int k);
  /// (1+T)^s for any integer s, including negative exponents.
  static TruncPoly group_element(std::int64_t p, int m, int k, std::int64_t s);

  std::int64_t p() const { return p_; }
  int m() const { return m_; }
  int k() const { return k_; }
  BigInt modulus() const { return modulus_; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  const BigInt& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  bool is_zero() const;

  friend TruncPoly operator+(const TruncPoly& a, const TruncPoly& b);
  friend TruncPoly operator-(const TruncPoly& a, const TruncPoly& b);
  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b);
  friend TruncPoly operator-(const TruncPoly& a);
  friend TruncPoly operator*(const BigInt& c, const TruncPoly& a);
  friend bool operator==(const TruncPoly& a, const TruncPoly& b) = default;

  /// Renders like "18*T^2 + 9*T^3 + 5*T^4 (mod 5^2, T^5)".
  std::string to_string(bool with_modulus = true) const;

 private:
  void check_compatible(const TruncPoly& other) const;
  void normalize();

  std::int64_t p_ = 0;
  int m_ = 0;
  int k_ = 0;
  BigInt modulus_ = 1;
  std::vector<BigInt> coeffs_;
};

/// Element of (Z/p^prec)[Gamma_n], Gamma_n cyclic of order p^n with
/// generator 1+T. Coefficient i multiplies (1+T)^i.
class GroupPoly {
 public:
  GroupPoly() = default;
  GroupPoly(std::int64_t p, int n, int prec);
  GroupPoly(std::int64_t p, int n, int prec, std::vector<BigInt> coeffs);

  static GroupPoly delta(std::int64_t p, int n, int prec, std::int64_t i);

  std::int64_t p() const { return p_; }
  int n() const { return n_; }
  int prec() const { return prec_; }
  std::int64_t order() const { return static_cast<std::int64_t>(coeffs_.size()); }
  BigInt modulus() const { return ipow(BigInt(p_), static_cast<unsigned>(prec_)); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  const BigInt& operator[](std::int64_t i) const { return coeffs_[static_cast<std::size_t>(i)]; }

  friend GroupPoly operator+(const GroupPoly& a, const GroupPoly& b);
  friend GroupPoly operator*(const GroupPoly& a, const GroupPoly& b);
  friend bool operator==(const GroupPoly& a, const GroupPoly& b) = default;

  /// Reduce coefficients to a lower precision.
  GroupPoly with_prec(int prec) const;

 private:
  std::int64_t p_ = 0;
  int n_ = 0;
  int prec_ = 0;
  std::vector<BigInt> coeffs_;
};

PadicInt teichmueller(std::int64_t a, std::int64_t p, int prec);
PadicInt hensel_unit_root(std::int64_t a_p, std::int64_t p, int prec);

/// Binomial expansion of sum_i c_i (1+T)^i modulo (p^m, T^k).
TruncPoly group_to_series(const GroupPoly& g, int m, int k);

/// Image of an exact T-polynomial (coefficients taken mod p^m) in
/// (Z/p^m)[T]/((1+T)^{p^s} - 1), written in the group basis.
GroupPoly reduce_cyclotomic(const std::vector<BigInt>& poly, std::int64_t p, int m, int s);
/// Projection Gamma_n -> Gamma_s of a group-ring element.
GroupPoly reduce_cyclotomic(const GroupPoly& g, int s);

/// The involution (1+T) -> (1+T)^{-1}.
TruncPoly iota(const TruncPoly& f);

struct OrderAndLeading {
  std::optional<int> rho;
  BigInt leading = 0;            ///< raw coefficient c_rho
  BigInt leading_derivative = 0; ///< rho! * c_rho mod p^m
};
OrderAndLeading order_and_leading(const TruncPoly& f);

nlohmann::json to_json(const TruncPoly& f);
nlohmann::json to_json(const GroupPoly& g);
TruncPoly trunc_poly_from_json(const nlohmann::json& j);
GroupPoly group_poly_from_json(const nlohmann::json& j);

}  // namespace anticyc
