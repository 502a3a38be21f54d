#include "anticyc/curve.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace anticyc {

namespace {

struct BInvariants {
  BigInt b2, b4, b6, b8;
};

BInvariants b_invariants(const CurveSpec& e) {
  const BigInt a1 = e.a[0], a2 = e.a[1], a3 = e.a[2], a4 = e.a[3], a6 = e.a[4];
  BInvariants b;
  b.b2 = a1 * a1 + 4 * a2;
  b.b4 = 2 * a4 + a1 * a3;
  b.b6 = a3 * a3 + 4 * a6;
  b.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return b;
}

}  // namespace

BigInt discriminant(const CurveSpec& e) {
  auto [b2, b4, b6, b8] = b_invariants(e);
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

BigInt c4_invariant(const CurveSpec& e) {
  auto b = b_invariants(e);
  return b.b2 * b.b2 - 24 * b.b4;
}

std::int64_t ap_point_count(const CurveSpec& e, std::int64_t ell) {
  if (!is_prime(ell)) throw DomainError("ap_point_count: ell must be prime");
  if (e.N % ell == 0 || discriminant(e) % ell == 0)
    throw BadReductionError("ap_point_count: bad reduction at " + std::to_string(ell));
  auto md = [ell](std::int64_t x) { return ((x % ell) + ell) % ell; };
  const std::int64_t a1 = md(e.a[0]), a2 = md(e.a[1]), a3 = md(e.a[2]), a4 = md(e.a[3]), a6 = md(e.a[4]);
  std::int64_t count = 1;  // point at infinity
  if (ell == 2) {
    for (std::int64_t x = 0; x < 2; ++x)
      for (std::int64_t y = 0; y < 2; ++y)
        if (md(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) == 0) ++count;
    return ell + 1 - count;
  }
  // Complete the square: (2y + a1 x + a3)^2 = 4 f(x) + (a1 x + a3)^2.
  std::vector<int> chi(static_cast<std::size_t>(ell), -1);
  chi[0] = 0;
  for (std::int64_t y = 1; y < ell; ++y) chi[static_cast<std::size_t>(y * y % ell)] = 1;
  for (std::int64_t x = 0; x < ell; ++x) {
    const std::int64_t f = md(md(md(x * x) * x) + md(a2 * md(x * x)) + md(a4 * x) + a6);
    const std::int64_t h = md(a1 * x + a3);
    count += 1 + chi[static_cast<std::size_t>(md(4 * f + h * h))];
  }
  return ell + 1 - count;
}

std::int64_t field_discriminant(std::int64_t delta) {
  if (delta <= 0 || !is_squarefree(delta))
    throw ValidationError("delta must be a positive squarefree integer, got " + std::to_string(delta));
  return delta % 4 == 3 ? -delta : -4 * delta;
}

SettingSpec validate_setting(const CurveSpec& e, std::int64_t p, std::int64_t delta, int prec) {
  if (p <= 3 || !is_prime(p)) throw ValidationError("p must be a prime > 3, got " + std::to_string(p));
  SettingSpec s;
  s.p = p;
  s.delta = delta;
  s.disc_k = field_discriminant(delta);
  if (std::find(kHeegnerDiscriminants.begin(), kHeegnerDiscriminants.end(), s.disc_k) == kHeegnerDiscriminants.end())
    throw ClassNumberError("Q(sqrt(-" + std::to_string(delta) + ")) has class number > 1 (D_K = " +
                           std::to_string(s.disc_k) + ")");
  if (e.N % p == 0) throw BadReductionError("p divides the conductor");
  s.a_p = ap_point_count(e, p);
  if (s.a_p % p == 0) throw SupersingularError("a_p = " + std::to_string(s.a_p) + " is divisible by p");
  if (kronecker(s.disc_k, p) != 1) throw NotSplitError("p is not split in K");
  if (kronecker(s.disc_k, e.q) != -1) throw NotInertError("q = " + std::to_string(e.q) + " is not inert in K");
  for (std::int64_t ell : prime_factors(e.M))
    if (kronecker(s.disc_k, ell) != 1)
      throw BadLevelSplitError("level prime " + std::to_string(ell) + " does not split in K");
  s.alpha = hensel_unit_root(s.a_p, p, prec);
  return s;
}

void check_curve(const CurveSpec& e) {
  const std::string who = "curve " + e.label + ": ";
  if (e.N <= 0 || !is_squarefree(e.N)) throw ConfigError(who + "conductor must be squarefree");
  if (!is_prime(e.q) || e.q * e.M != e.N || e.M % e.q == 0) throw ConfigError(who + "need N = q * M with q prime, q not dividing M");
  BigInt d = discriminant(e);
  if (d == 0) throw ConfigError(who + "singular model");
  // Semistable: the primes of bad reduction are exactly those dividing N.
  for (std::int64_t ell : prime_factors(e.N)) {
    if (d % ell != 0) throw ConfigError(who + "discriminant is prime to " + std::to_string(ell));
    d /= ipow(BigInt(ell), static_cast<unsigned>(valuation(d, ell)));
  }
  if (abs(d) != 1) throw ConfigError(who + "discriminant has primes outside the conductor");
  for (auto [ell, ap] : e.checksums)
    if (ap_point_count(e, ell) != ap) throw ConfigError(who + "checksum a_" + std::to_string(ell) + " mismatch");
}

CurveSpec curve_from_json(const nlohmann::json& j) {
  CurveSpec e;
  e.label = j.value("label", std::string("inline"));
  auto a = j.at("a_invariants");
  if (!a.is_array() || a.size() != 5) throw ConfigError("a_invariants must have five entries");
  for (std::size_t i = 0; i < 5; ++i) e.a[i] = a[i].get<std::int64_t>();
  e.N = j.at("N").get<std::int64_t>();
  e.q = j.at("q").get<std::int64_t>();
  e.M = j.value("M", e.q ? e.N / e.q : 1);
  if (j.contains("checksums"))
    for (auto& [k, v] : j.at("checksums").items()) e.checksums[std::stoll(k)] = v.get<std::int64_t>();
  e.central_value_vanishes = j.value("central_value_vanishes", true);
  return e;
}

nlohmann::json to_json(const CurveSpec& e) {
  nlohmann::json c = nlohmann::json::object();
  for (auto [ell, ap] : e.checksums) c[std::to_string(ell)] = ap;
  return {{"label", e.label}, {"a_invariants", e.a}, {"N", e.N}, {"q", e.q}, {"M", e.M},
          {"checksums", c}, {"central_value_vanishes", e.central_value_vanishes}};
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ANTICYC_DATA_DIR")) return env;
#ifdef ANTICYC_DEFAULT_DATA_DIR
  return ANTICYC_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

CurveRegistry CurveRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve registry " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("malformed curve registry: " + std::string(ex.what()));
  }
  CurveRegistry reg;
  for (const auto& row : j) {
    reg.curves_.push_back(curve_from_json(row));
    check_curve(reg.curves_.back());
  }
  return reg;
}

CurveRegistry CurveRegistry::load_default() { return load(data_dir() / "curves.json"); }

const CurveSpec& CurveRegistry::find(const std::string& label) const {
  for (const auto& e : curves_)
    if (e.label == label) return e;
  throw UnknownCurveError("unknown curve label " + label);
}

}  // namespace anticyc
