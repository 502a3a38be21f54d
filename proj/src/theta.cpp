#include "anticyc/theta.hpp"

namespace anticyc {

std::string to_string(ThetaFormula f) { return f == ThetaFormula::kStandard ? "standard" : "displayed"; }

ThetaFormula theta_formula_from_string(const std::string& s) {
  if (s == "standard") return ThetaFormula::kStandard;
  if (s == "displayed") return ThetaFormula::kDisplayed;
  throw ConfigError("unknown theta formula '" + s + "' (expected standard or displayed)");
}

std::int64_t half_unit_count(std::int64_t disc_k) {
  if (disc_k == -4) return 2;
  if (disc_k == -3) return 3;
  return 1;
}

ThetaElement theta_element(const ThetaContext& ctx, int n, int m, int k) {
  if (!ctx.classifier) throw DomainError("theta_element: no Gross point classifier");
  if (n < 1 || m < 1 || k < 1) throw DomainError("theta_element: n, m and k must be positive");
  const std::int64_t p = ctx.p;
  const int prec = ctx.alpha.prec();
  if (m > prec) throw PrecisionError("theta_element: output precision exceeds working precision");

  const std::int64_t order = ipow64(p, static_cast<unsigned>(n));
  // Parameters b = a u^i, i-major so that group index = position / (p - 1).
  std::vector<PadicInt> teich;
  for (std::int64_t a = 1; a < p; ++a) teich.push_back(teichmueller(a, p, prec));
  const PadicInt u(p, prec, BigInt(1 + p));
  std::vector<BigInt> params;
  params.reserve(static_cast<std::size_t>(order * (p - 1)));
  PadicInt ui(p, prec, BigInt(1));
  for (std::int64_t i = 0; i < order; ++i, ui = ui * u)
    for (const auto& t : teich) params.push_back((t * ui).residue());

  const auto low = ctx.classifier->classify_all(n, params, ctx.threads);
  const auto high = ctx.classifier->classify_all(n + 1, params, ctx.threads);

  const BigInt mod = ctx.alpha.modulus();
  const PadicInt alpha_inv = ctx.alpha.inverse();
  const PadicInt scale = alpha_inv.pow(n + 1) * PadicInt(p, prec, BigInt(ctx.units_k)).inverse();
  std::vector<BigInt> coeffs(static_cast<std::size_t>(order));
  for (std::int64_t i = 0; i < order; ++i) {
    BigInt sum_low = 0, sum_high = 0;
    for (std::int64_t a = 0; a < p - 1; ++a) {
      const auto idx = static_cast<std::size_t>(i * (p - 1) + a);
      sum_low += ctx.f(static_cast<Eigen::Index>(low[idx]));
      sum_high += ctx.f(static_cast<Eigen::Index>(high[idx]));
    }
    const PadicInt lo(p, prec, mod_floor(sum_low, mod)), hi(p, prec, mod_floor(sum_high, mod));
    const PadicInt v = ctx.formula == ThetaFormula::kStandard ? hi - alpha_inv * lo : ctx.alpha * lo - hi;
    coeffs[static_cast<std::size_t>(i)] = (v * scale).residue();
  }

  ThetaElement th;
  th.label = ctx.label;
  th.p = p;
  th.delta = ctx.delta;
  th.n = n;
  th.m = m;
  th.k = k;
  th.group = GroupPoly(p, n, prec, std::move(coeffs));
  th.series = group_to_series(th.group, m, k);
  th.lead = order_and_leading(th.series);
  return th;
}

BigInt trivial_zero_check(const ThetaElement& th, int guard) {
  const int prec = std::max(1, th.group.prec() - guard);
  const BigInt mod = ipow(BigInt(th.p), static_cast<unsigned>(prec));
  BigInt sum = 0;
  for (const auto& c : th.group.coeffs()) sum += c;
  sum = mod_floor(sum, mod);
  if (sum != 0)
    throw OracleFailure("trivial zero: Theta_" + std::to_string(th.n) + "(0) = " + sum.str() + " mod " +
                        std::to_string(th.p) + "^" + std::to_string(prec));
  return sum;
}

bool consistency_check(const ThetaElement& th_n, const ThetaElement& th_prev) {
  if (th_n.p != th_prev.p || th_n.n != th_prev.n + 1) throw DomainError("consistency_check: need levels n and n - 1");
  const int prec = std::min(th_n.group.prec(), th_prev.group.prec());
  return reduce_cyclotomic(th_n.group.with_prec(prec), th_prev.n) == th_prev.group.with_prec(prec);
}

std::optional<OrbitWitness> orbit_match(const TruncPoly& f, const TruncPoly& ref, int n) {
  if (f.p() != ref.p() || f.m() != ref.m() || f.k() != ref.k())
    throw DomainError("orbit_match: moduli differ");
  const std::int64_t order = ipow64(f.p(), static_cast<unsigned>(n));
  const TruncPoly step = TruncPoly::group_element(f.p(), f.m(), f.k(), 1);
  for (int e = 0; e < 2; ++e) {
    TruncPoly g = e ? iota(f) : f;
    for (std::int64_t s = 0; s < order; ++s, g = g * step) {
      if (g == ref) return OrbitWitness{1, s, e};
      if (-g == ref) return OrbitWitness{-1, s, e};
    }
  }
  return std::nullopt;
}

std::optional<std::pair<BigInt, OrbitWitness>> unit_scalar_match(const TruncPoly& f, const TruncPoly& ref, int n) {
  const BigInt mod = ipow(BigInt(f.p()), static_cast<unsigned>(f.m()));
  const bool use_c2 = f.k() >= 3;
  for (BigInt c = 1; c < mod; ++c) {
    if (c % f.p() == 0) continue;
    // c_2 is an orbit invariant up to sign, which prunes almost every c.
    if (use_c2) {
      const BigInt lhs = mod_floor(c * f.coeffs()[2], mod);
      if (lhs != mod_floor(ref.coeffs()[2], mod) && lhs != mod_floor(-ref.coeffs()[2], mod)) continue;
    }
    if (auto w = orbit_match(f * TruncPoly(f.p(), f.m(), f.k(), {c}), ref, n)) return std::make_pair(c, *w);
  }
  return std::nullopt;
}

Verdict report_criterion(const ThetaElement& th) {
  Verdict v;
  v.rho = th.lead.rho;
  v.leading = th.lead.leading;
  v.leading_derivative = th.lead.leading_derivative;
  const auto& c = th.series.coeffs();
  v.low_terms_vanish = th.k >= 2 && c[0] == 0 && c[1] == 0;
  v.criterion = v.rho && *v.rho == 2 && v.low_terms_vanish;
  if (!v.rho)
    v.note = "series vanishes mod (p^m, T^k); raise n or m";
  else if (v.criterion)
    v.note = "Theta vanishes to order exactly 2 at T = 0; the remaining hypotheses of the non-vanishing "
             "criterion (the L-value side conditions) are not verified by this tool";
  else
    v.note = "order of vanishing is " + std::to_string(*v.rho) + ", not 2";
  return v;
}

nlohmann::json to_json(const OrbitWitness& w) {
  return {{"sign", w.sign}, {"shift", w.shift}, {"involution", w.involution}};
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j{{"rho", v.rho ? nlohmann::json(*v.rho) : nlohmann::json(nullptr)},
                   {"leading", v.leading.str()},
                   {"leading_derivative", v.leading_derivative.str()},
                   {"low_terms_vanish", v.low_terms_vanish},
                   {"criterion", v.criterion},
                   {"note", v.note}};
  return j;
}

nlohmann::json to_json(const ThetaElement& th) {
  std::vector<std::string> coeffs;
  for (const auto& c : th.series.coeffs()) coeffs.push_back(c.str());
  return {{"label", th.label}, {"p", th.p}, {"delta", th.delta}, {"n", th.n}, {"m", th.m}, {"k", th.k},
          {"coefficients", coeffs}, {"series", th.series.to_string()}, {"group", to_json(th.group)}};
}

}  // namespace anticyc
