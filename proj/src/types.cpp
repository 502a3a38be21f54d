#include "anticyc/types.hpp"

#include <numeric>

namespace anticyc {

const char* Error::name() const noexcept {
  switch (code_) {
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kSupersingular: return "SupersingularError";
    case ErrorCode::kNotSplit: return "NotSplitError";
    case ErrorCode::kNotInert: return "NotInertError";
    case ErrorCode::kClassNumber: return "ClassNumberError";
    case ErrorCode::kBadLevelSplit: return "BadLevelSplitError";
    case ErrorCode::kBadReduction: return "BadReductionError";
    case ErrorCode::kUnknownCurve: return "UnknownCurveError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kConstruction: return "ConstructionError";
    case ErrorCode::kRank: return "RankError";
    case ErrorCode::kDefiniteness: return "DefinitenessError";
    case ErrorCode::kSearchBound: return "SearchBoundError";
    case ErrorCode::kPrecision: return "PrecisionError";
    case ErrorCode::kConvention: return "ConventionError";
    case ErrorCode::kRamifiedSplit: return "RamifiedSplitError";
    case ErrorCode::kEigenvalueMismatch: return "EigenvalueMismatch";
    case ErrorCode::kAmbiguousEigenform: return "AmbiguousEigenform";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kOracle: return "OracleFailure";
    case ErrorCode::kInternal: return "InternalError";
    case ErrorCode::kTableMismatch: return "TableMismatch";
  }
  return "Error";
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt ipow(const BigInt& base, unsigned exp) {
  BigInt r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

std::int64_t ipow64(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod_floor(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw DomainError("inverse_mod: element is not a unit");
  return mod_floor(old_s, m);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t next_prime(std::int64_t n) {
  std::int64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n <= 0) throw DomainError("kronecker: modulus must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol for odd n.
  a = ((a % n) + n) % n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int valuation(BigInt a, std::int64_t p) {
  if (a == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 0) n = -n;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_squarefree(std::int64_t n) {
  if (n < 0) n = -n;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return n != 0;
}

std::string to_string(const BigRat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

BigRat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return BigRat(BigInt(s));
  return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace anticyc
