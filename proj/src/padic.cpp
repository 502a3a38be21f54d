#include "anticyc/padic.hpp"

#include <sstream>

namespace anticyc {

PadicInt::PadicInt(std::int64_t p, int prec, const BigInt& value) : p_(p), prec_(prec) {
  if (prec < 1) throw DomainError("PadicInt: precision must be positive");
  residue_ = mod_floor(value, modulus());
}

PadicInt PadicInt::with_prec(int prec) const {
  if (prec > prec_) throw PrecisionError("PadicInt: cannot raise precision");
  return PadicInt(p_, prec, residue_);
}

PadicInt PadicInt::inverse() const {
  if (!is_unit()) throw DomainError("PadicInt: inverse of a non-unit");
  return PadicInt(p_, prec_, inverse_mod(residue_, modulus()));
}

PadicInt PadicInt::pow(std::int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  BigInt m = modulus();
  BigInt base = residue_, r = 1;
  while (e > 0) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return PadicInt(p_, prec_, r);
}

namespace {

void check_prime(const PadicInt& a, const PadicInt& b) {
  if (a.p() != b.p()) throw DomainError("PadicInt: mismatched primes");
}

}  // namespace

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
  check_prime(a, b);
  return PadicInt(a.p(), std::min(a.prec(), b.prec()), a.residue() + b.residue());
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) {
  check_prime(a, b);
  return PadicInt(a.p(), std::min(a.prec(), b.prec()), a.residue() - b.residue());
}

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
  check_prime(a, b);
  return PadicInt(a.p(), std::min(a.prec(), b.prec()), a.residue() * b.residue());
}

PadicInt operator-(const PadicInt& a) { return PadicInt(a.p(), a.prec(), -a.residue()); }

bool operator==(const PadicInt& a, const PadicInt& b) {
  return a.p() == b.p() && a.prec() == b.prec() && a.residue() == b.residue();
}

// ---------------------------------------------------------------------------

TruncPoly::TruncPoly(std::int64_t p, int m, int k) : TruncPoly(p, m, k, {}) {}

TruncPoly::TruncPoly(std::int64_t p, int m, int k, std::vector<BigInt> coeffs)
    : p_(p), m_(m), k_(k), coeffs_(std::move(coeffs)) {
  if (m < 1 || k < 1) throw DomainError("TruncPoly: m and k must be positive");
  modulus_ = ipow(BigInt(p), static_cast<unsigned>(m));
  normalize();
}

void TruncPoly::normalize() {
  coeffs_.resize(static_cast<std::size_t>(k_), BigInt(0));
  for (auto& c : coeffs_) c = mod_floor(c, modulus_);
}

TruncPoly TruncPoly::one(std::int64_t p, int m, int k) {
  return TruncPoly(p, m, k, {BigInt(1)});
}

TruncPoly TruncPoly::group_element(std::int64_t p, int m, int k, std::int64_t s) {
  // Generalized binomial coefficients C(s, j) are integers for every integer s.
  std::vector<BigInt> c(static_cast<std::size_t>(k));
  BigInt binom = 1;
  for (int j = 0; j < k; ++j) {
    c[static_cast<std::size_t>(j)] = binom;
    binom = binom * (BigInt(s) - j) / (j + 1);
  }
  return TruncPoly(p, m, k, std::move(c));
}

bool TruncPoly::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

void TruncPoly::check_compatible(const TruncPoly& o) const {
  if (p_ != o.p_ || m_ != o.m_ || k_ != o.k_)
    throw DomainError("TruncPoly: incompatible quotient rings");
}

TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) {
  a.check_compatible(b);
  auto c = a.coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs_[i];
  return TruncPoly(a.p_, a.m_, a.k_, std::move(c));
}

TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) {
  a.check_compatible(b);
  auto c = a.coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs_[i];
  return TruncPoly(a.p_, a.m_, a.k_, std::move(c));
}

TruncPoly operator-(const TruncPoly& a) {
  auto c = a.coeffs_;
  for (auto& x : c) x = -x;
  return TruncPoly(a.p_, a.m_, a.k_, std::move(c));
}

TruncPoly operator*(const BigInt& s, const TruncPoly& a) {
  auto c = a.coeffs_;
  for (auto& x : c) x *= s;
  return TruncPoly(a.p_, a.m_, a.k_, std::move(c));
}

TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
  a.check_compatible(b);
  const auto k = static_cast<std::size_t>(a.k_);
  std::vector<BigInt> c(k, BigInt(0));
  for (std::size_t i = 0; i < k; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; i + j < k; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return TruncPoly(a.p_, a.m_, a.k_, std::move(c));
}

std::string TruncPoly::to_string(bool with_modulus) const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < k_; ++i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  if (with_modulus) os << " (mod " << p_ << "^" << m_ << ", T^" << k_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

GroupPoly::GroupPoly(std::int64_t p, int n, int prec) : GroupPoly(p, n, prec, {}) {}

GroupPoly::GroupPoly(std::int64_t p, int n, int prec, std::vector<BigInt> coeffs)
    : p_(p), n_(n), prec_(prec), coeffs_(std::move(coeffs)) {
  if (n < 0 || prec < 1) throw DomainError("GroupPoly: invalid level or precision");
  const auto order = static_cast<std::size_t>(ipow64(p, static_cast<unsigned>(n)));
  if (coeffs_.size() > order) throw DomainError("GroupPoly: too many coefficients");
  coeffs_.resize(order, BigInt(0));
  const BigInt mod = modulus();
  for (auto& c : coeffs_) c = mod_floor(c, mod);
}

GroupPoly GroupPoly::delta(std::int64_t p, int n, int prec, std::int64_t i) {
  GroupPoly g(p, n, prec);
  const std::int64_t ord = g.order();
  g.coeffs_[static_cast<std::size_t>(((i % ord) + ord) % ord)] = 1;
  return g;
}

GroupPoly GroupPoly::with_prec(int prec) const {
  if (prec > prec_) throw PrecisionError("GroupPoly: cannot raise precision");
  return GroupPoly(p_, n_, prec, coeffs_);
}

GroupPoly operator+(const GroupPoly& a, const GroupPoly& b) {
  if (a.p_ != b.p_ || a.n_ != b.n_) throw DomainError("GroupPoly: incompatible groups");
  const int prec = std::min(a.prec_, b.prec_);
  auto c = a.coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs_[i];
  return GroupPoly(a.p_, a.n_, prec, std::move(c));
}

GroupPoly operator*(const GroupPoly& a, const GroupPoly& b) {
  if (a.p_ != b.p_ || a.n_ != b.n_) throw DomainError("GroupPoly: incompatible groups");
  const int prec = std::min(a.prec_, b.prec_);
  const auto ord = a.coeffs_.size();
  std::vector<BigInt> c(ord, BigInt(0));
  for (std::size_t i = 0; i < ord; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < ord; ++j) c[(i + j) % ord] += a.coeffs_[i] * b.coeffs_[j];
  }
  return GroupPoly(a.p_, a.n_, prec, std::move(c));
}

// ---------------------------------------------------------------------------

PadicInt teichmueller(std::int64_t a, std::int64_t p, int prec) {
  if (a % p == 0) throw DomainError("teichmueller: argument divisible by p");
  PadicInt x(p, prec, a);
  // a -> a^p converges to the Teichmueller lift; one digit per step.
  for (int i = 0; i < prec; ++i) x = x.pow(p);
  return x;
}

PadicInt hensel_unit_root(std::int64_t a_p, std::int64_t p, int prec) {
  if (a_p % p == 0)
    throw SupersingularError("hensel_unit_root: p divides a_p (p = " + std::to_string(p) + ")");
  const PadicInt a(p, prec, a_p), pp(p, prec, p);
  PadicInt x(p, prec, a_p);
  // Newton iteration on X^2 - a_p X + p; the derivative 2X - a_p is a unit.
  for (int i = 0; i < prec + 1; ++i) {
    PadicInt f = x * x - a * x + pp;
    PadicInt df = PadicInt(p, prec, 2) * x - a;
    x = x - f * df.inverse();
  }
  return x;
}

TruncPoly group_to_series(const GroupPoly& g, int m, int k) {
  if (m > g.prec()) throw PrecisionError("group_to_series: m exceeds group precision");
  const BigInt mod = ipow(BigInt(g.p()), static_cast<unsigned>(m));
  std::vector<BigInt> out(static_cast<std::size_t>(k), BigInt(0));
  // Pascal rows of (1+T)^i, truncated at T^k, updated incrementally.
  std::vector<BigInt> row(static_cast<std::size_t>(k), BigInt(0));
  row[0] = 1;
  for (std::int64_t i = 0; i < g.order(); ++i) {
    const BigInt& c = g[i];
    if (c != 0)
      for (std::size_t j = 0; j < row.size(); ++j) out[j] += c * row[j];
    for (std::size_t j = row.size() - 1; j >= 1; --j) row[j] = (row[j] + row[j - 1]) % mod;
  }
  return TruncPoly(g.p(), m, k, std::move(out));
}

GroupPoly reduce_cyclotomic(const std::vector<BigInt>& poly, std::int64_t p, int m, int s) {
  const std::int64_t ord = ipow64(p, static_cast<unsigned>(s));
  const BigInt mod = ipow(BigInt(p), static_cast<unsigned>(m));
  std::vector<BigInt> c(static_cast<std::size_t>(ord), BigInt(0));
  // T^j = sum_i C(j,i) (-1)^{j-i} (1+T)^i
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (poly[j] % mod == 0) continue;
    BigInt binom = 1;
    for (std::int64_t i = 0; i <= static_cast<std::int64_t>(j); ++i) {
      BigInt term = ((static_cast<std::int64_t>(j) - i) % 2 == 0) ? binom : BigInt(-binom);
      c[static_cast<std::size_t>(i % ord)] += poly[j] * term;
      binom = binom * (static_cast<std::int64_t>(j) - i) / (i + 1);
    }
  }
  return GroupPoly(p, s, m, std::move(c));
}

GroupPoly reduce_cyclotomic(const GroupPoly& g, int s) {
  if (s > g.n()) throw DomainError("reduce_cyclotomic: target level above source level");
  const std::int64_t ord = ipow64(g.p(), static_cast<unsigned>(s));
  std::vector<BigInt> c(static_cast<std::size_t>(ord), BigInt(0));
  for (std::int64_t i = 0; i < g.order(); ++i) c[static_cast<std::size_t>(i % ord)] += g[i];
  return GroupPoly(g.p(), s, g.prec(), std::move(c));
}

TruncPoly iota(const TruncPoly& f) {
  // Horner in the substitution T -> (1+T)^{-1} - 1.
  const TruncPoly sub =
      TruncPoly::group_element(f.p(), f.m(), f.k(), -1) - TruncPoly::one(f.p(), f.m(), f.k());
  TruncPoly acc(f.p(), f.m(), f.k());
  for (int i = f.k() - 1; i >= 0; --i)
    acc = acc * sub + TruncPoly(f.p(), f.m(), f.k(), {f[i]});
  return acc;
}

OrderAndLeading order_and_leading(const TruncPoly& f) {
  OrderAndLeading out;
  for (int i = 0; i < f.k(); ++i) {
    if (f[i] != 0) {
      out.rho = i;
      out.leading = f[i];
      BigInt fact = 1;
      for (int j = 2; j <= i; ++j) fact *= j;
      out.leading_derivative = mod_floor(fact * f[i], f.modulus());
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json coeff_array(const std::vector<BigInt>& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : c) arr.push_back(x.str());
  return arr;
}

std::vector<BigInt> parse_coeffs(const nlohmann::json& arr) {
  std::vector<BigInt> c;
  for (const auto& x : arr) c.emplace_back(x.get<std::string>());
  return c;
}

}  // namespace

nlohmann::json to_json(const TruncPoly& f) {
  return {{"p", f.p()}, {"m", f.m()}, {"k", f.k()}, {"coefficients", coeff_array(f.coeffs())}};
}

nlohmann::json to_json(const GroupPoly& g) {
  return {{"p", g.p()}, {"n", g.n()}, {"prec", g.prec()}, {"coefficients", coeff_array(g.coeffs())}};
}

TruncPoly trunc_poly_from_json(const nlohmann::json& j) {
  return TruncPoly(j.at("p").get<std::int64_t>(), j.at("m").get<int>(), j.at("k").get<int>(),
                   parse_coeffs(j.at("coefficients")));
}

GroupPoly group_poly_from_json(const nlohmann::json& j) {
  return GroupPoly(j.at("p").get<std::int64_t>(), j.at("n").get<int>(), j.at("prec").get<int>(),
                   parse_coeffs(j.at("coefficients")));
}

}  // namespace anticyc
