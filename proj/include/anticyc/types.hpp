#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anticyc {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using BigRat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                             boost::multiprecision::et_off>;

template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using RowVec4 = Eigen::Matrix<Scalar, 1, 4>;
template <typename Scalar>
using MatX4 = Eigen::Matrix<Scalar, Eigen::Dynamic, 4>;
template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMat4 = Mat4<BigInt>;
using IntVec4 = Vec4<BigInt>;
using RatMat4 = Mat4<BigRat>;
using RatVec4 = Vec4<BigRat>;

/// Error families map onto process exit codes: 10-19 validation,
/// 20-29 construction, 30-39 oracle failures.
enum class ErrorCode : int {
  kValidation = 10,
  kSupersingular = 11,
  kNotSplit = 12,
  kNotInert = 13,
  kClassNumber = 14,
  kBadLevelSplit = 15,
  kBadReduction = 16,
  kUnknownCurve = 17,
  kConfig = 18,
  kConstruction = 20,
  kRank = 21,
  kDefiniteness = 22,
  kSearchBound = 23,
  kPrecision = 24,
  kConvention = 25,
  kRamifiedSplit = 26,
  kEigenvalueMismatch = 27,
  kAmbiguousEigenform = 28,
  kDomain = 29,
  kOracle = 30,
  kInternal = 31,
  kTableMismatch = 32,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }
  const char* name() const noexcept;

 private:
  ErrorCode code_;
};

#define ANTICYC_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

ANTICYC_DEFINE_ERROR(ValidationError, kValidation)
ANTICYC_DEFINE_ERROR(SupersingularError, kSupersingular)
ANTICYC_DEFINE_ERROR(NotSplitError, kNotSplit)
ANTICYC_DEFINE_ERROR(NotInertError, kNotInert)
ANTICYC_DEFINE_ERROR(ClassNumberError, kClassNumber)
ANTICYC_DEFINE_ERROR(BadLevelSplitError, kBadLevelSplit)
ANTICYC_DEFINE_ERROR(BadReductionError, kBadReduction)
ANTICYC_DEFINE_ERROR(UnknownCurveError, kUnknownCurve)
ANTICYC_DEFINE_ERROR(ConfigError, kConfig)
ANTICYC_DEFINE_ERROR(ConstructionError, kConstruction)
ANTICYC_DEFINE_ERROR(RankError, kRank)
ANTICYC_DEFINE_ERROR(DefinitenessError, kDefiniteness)
ANTICYC_DEFINE_ERROR(SearchBoundError, kSearchBound)
ANTICYC_DEFINE_ERROR(PrecisionError, kPrecision)
ANTICYC_DEFINE_ERROR(ConventionError, kConvention)
ANTICYC_DEFINE_ERROR(RamifiedSplitError, kRamifiedSplit)
ANTICYC_DEFINE_ERROR(EigenvalueMismatch, kEigenvalueMismatch)
ANTICYC_DEFINE_ERROR(AmbiguousEigenform, kAmbiguousEigenform)
ANTICYC_DEFINE_ERROR(DomainError, kDomain)
ANTICYC_DEFINE_ERROR(OracleFailure, kOracle)
ANTICYC_DEFINE_ERROR(InternalError, kInternal)

#undef ANTICYC_DEFINE_ERROR

// Small integer helpers shared by every module.

/// Floor division for signed big integers.
BigInt floor_div(const BigInt& a, const BigInt& b);
/// Representative of a mod m in [0, m).
BigInt mod_floor(const BigInt& a, const BigInt& m);
BigInt ipow(const BigInt& base, unsigned exp);
std::int64_t ipow64(std::int64_t base, unsigned exp);
BigInt inverse_mod(const BigInt& a, const BigInt& m);
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt lcm(const BigInt& a, const BigInt& b);

bool is_prime(std::int64_t n);
std::int64_t next_prime(std::int64_t n);
/// Legendre/Kronecker symbol (a | n) for n > 0.
int kronecker(std::int64_t a, std::int64_t n);
/// Valuation v_p(a); a must be nonzero.
int valuation(BigInt a, std::int64_t p);
bool is_squarefree(std::int64_t n);
std::vector<std::int64_t> prime_factors(std::int64_t n);

std::string to_string(const BigRat& r);
BigRat parse_rational(const std::string& s);

}  // namespace anticyc
