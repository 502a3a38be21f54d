#include "anticyc/gross.hpp"

#include <algorithm>

namespace anticyc {

namespace {

IntVec4 integral_coords(const QuatLattice& lat, const QuatElement& x, const char* what) {
  RatVec4 c = lat.coordinates(x);
  IntVec4 out;
  for (int i = 0; i < 4; ++i) {
    if (denominator(c(i)) != 1) throw InternalError(std::string(what) + ": element not in the order");
    out(i) = numerator(c(i));
  }
  return out;
}

/// Arithmetic on R-coordinate vectors modulo N.
struct ModRing {
  const StructureConstants& c;
  BigInt mod;

  IntVec4 reduce(IntVec4 x) const {
    for (int i = 0; i < 4; ++i) x(i) = mod_floor(x(i), mod);
    return x;
  }
  IntVec4 mul(const IntVec4& x, const IntVec4& y) const {
    IntVec4 z = IntVec4::Zero();
    for (int i = 0; i < 4; ++i) {
      if (x(i) == 0) continue;
      for (int j = 0; j < 4; ++j)
        if (y(j) != 0) z += (x(i) * y(j)) * c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return reduce(z);
  }
};

bool unit_content(const IntVec4& v, std::int64_t p) {
  for (int i = 0; i < 4; ++i)
    if (v(i) % p != 0) return true;
  return false;
}

/// The scalar s with u = s * v mod N, v of unit content.
BigInt ratio(const IntVec4& u, const IntVec4& v, std::int64_t p, const BigInt& mod) {
  int j = 0;
  while (v(j) % p == 0) ++j;
  BigInt s = mod_floor(u(j) * inverse_mod(v(j), mod), mod);
  for (int i = 0; i < 4; ++i)
    if (mod_floor(u(i) - s * v(i), mod) != 0) throw InternalError("p_splitting: element is not a multiple of the matrix unit");
  return s;
}

IntMat4 inverse_mod_matrix(IntMat4 m, const BigInt& mod) {
  IntMat4 inv = IntMat4::Identity();
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    while (piv < 4 && gcd(m(piv, c), mod) != 1) ++piv;
    if (piv == 4) throw ConstructionError("p_splitting: image of R is not all of M_2(Z_p)");
    m.row(c).swap(m.row(piv));
    inv.row(c).swap(inv.row(piv));
    const BigInt s = inverse_mod(m(c, c), mod);
    for (int j = 0; j < 4; ++j) {
      m(c, j) = mod_floor(m(c, j) * s, mod);
      inv(c, j) = mod_floor(inv(c, j) * s, mod);
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const BigInt f = m(r, c);
      for (int j = 0; j < 4; ++j) {
        m(r, j) = mod_floor(m(r, j) - f * m(c, j), mod);
        inv(r, j) = mod_floor(inv(r, j) - f * inv(c, j), mod);
      }
    }
  }
  return inv;
}

}  // namespace

Mat2 Splitting::apply(const IntVec4& r_coords) const {
  const BigInt mod = modulus();
  Vec4<BigInt> y = coords * r_coords;
  Mat2 out;
  out << mod_floor(y(0), mod), mod_floor(y(1), mod), mod_floor(y(2), mod), mod_floor(y(3), mod);
  return out;
}

StructureConstants structure_constants(const QuatOrder& order) {
  StructureConstants c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      QuatElement prod = quat_mul<BigRat>(order.algebra, order.lattice.element(i), order.lattice.element(j));
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = integral_coords(order.lattice, prod, "structure_constants");
    }
  return c;
}

std::pair<std::int64_t, std::int64_t> minimal_polynomial(std::int64_t disc_k) {
  if (disc_k % 4 == 0) return {0, -disc_k / 4};
  if (((disc_k % 4) + 4) % 4 == 1) return {1, (1 - disc_k) / 4};
  throw ValidationError("not a fundamental discriminant: " + std::to_string(disc_k));
}

std::optional<Embedding> find_optimal_embedding(const QuatOrder& order, std::int64_t disc_k) {
  const auto [t, nr] = minimal_polynomial(disc_k);
  const AlgebraSpec& alg = order.algebra;
  IntMat4 g = normalized_gram(alg, order.lattice, 1);
  IntMat4 u = lll_gram(g);
  IntMat4 reduced = u * g * u.transpose();
  std::optional<IntVec4> best;
  for (const auto& w : enumerate_integral(reduced, BigInt(2 * nr))) {
    IntVec4 coords = (w.cast<BigInt>().transpose() * u).transpose();
    QuatElement x = (coords.transpose() * order.lattice.basis).transpose().cast<BigRat>() / BigRat(order.lattice.denom);
    if (quat_trd<BigRat>(x) != t || quat_nrd<BigRat>(alg, x) != nr) continue;
    if (!best || std::lexicographical_compare(coords.data(), coords.data() + 4, best->data(), best->data() + 4))
      best = coords;
  }
  if (!best) return std::nullopt;
  Embedding emb;
  emb.omega = (best->transpose() * order.lattice.basis).transpose().cast<BigRat>() / BigRat(order.lattice.denom);
  emb.t = t;
  emb.nr = nr;
  return emb;
}

Embedding optimal_embedding(const QuatOrder& order, std::int64_t disc_k) {
  auto emb = find_optimal_embedding(order, disc_k);
  if (!emb) {
    const auto [t, nr] = minimal_polynomial(disc_k);
    throw SearchBoundError("optimal_embedding: no element with Trd = " + std::to_string(t) + ", Nrd = " +
                           std::to_string(nr) + " in R");
  }
  return *emb;
}

Embedding conjugate(const Embedding& emb) {
  Embedding out = emb;
  out.omega = -emb.omega;
  out.omega(0) += emb.t;
  return out;
}

Splitting p_splitting(const QuatOrder& order, const Embedding& emb, std::int64_t p, int prec, bool swap_roots) {
  if (prec < 1) throw DomainError("p_splitting: prec must be positive");
  const BigInt mod = ipow(BigInt(p), static_cast<unsigned>(prec));
  std::vector<std::int64_t> roots;
  for (std::int64_t x = 0; x < p; ++x)
    if (mod_floor(BigInt(x * x - emb.t * x + emb.nr), BigInt(p)) == 0) roots.push_back(x);
  if (roots.size() != 2) throw RamifiedSplitError("p_splitting: minimal polynomial of omega has no distinct roots mod p");
  // Newton lift of the chosen simple root.
  auto lift = [&](std::int64_t r0) {
    BigInt r = r0;
    for (int k = 0; k < prec; ++k) {
      BigInt f = r * r - emb.t * r + emb.nr;
      BigInt df = 2 * r - emb.t;
      r = mod_floor(r - f * inverse_mod(mod_floor(df, mod), mod), mod);
    }
    return r;
  };
  Splitting s;
  s.p = p;
  s.prec = prec;
  const BigInt lam = lift(roots[swap_roots ? 1 : 0]);
  const BigInt lam_bar = mod_floor(BigInt(emb.t) - lam, mod);
  s.lambda = PadicInt(p, prec, lam);
  s.lambda_bar = PadicInt(p, prec, lam_bar);

  const StructureConstants c = structure_constants(order);
  const ModRing ring{c, mod};
  const IntVec4 one = integral_coords(order.lattice, QuatElement(1, 0, 0, 0), "p_splitting");
  const IntVec4 w = integral_coords(order.lattice, emb.omega, "p_splitting");
  const BigInt inv_diff = inverse_mod(mod_floor(lam - lam_bar, mod), mod);
  const IntVec4 e = ring.reduce((w - lam_bar * one) * inv_diff);
  const IntVec4 f = ring.reduce(one - e);

  IntVec4 e12, e21;
  bool found = false;
  for (int k = 0; k < 4 && !found; ++k) {
    IntVec4 rk = IntVec4::Unit(k);
    e12 = ring.mul(ring.mul(e, rk), f);
    found = unit_content(e12, p);
  }
  if (!found) throw ConstructionError("p_splitting: e R (1 - e) has no unit generator");
  found = false;
  for (int k = 0; k < 4 && !found; ++k) {
    IntVec4 rk = IntVec4::Unit(k);
    e21 = ring.mul(ring.mul(f, rk), e);
    found = unit_content(e21, p);
  }
  if (!found) throw ConstructionError("p_splitting: (1 - e) R e has no unit generator");
  const BigInt cst = ratio(ring.mul(e12, e21), e, p, mod);
  e21 = ring.reduce(e21 * inverse_mod(cst, mod));

  for (int k = 0; k < 4; ++k) {
    IntVec4 x = IntVec4::Unit(k);
    s.coords(0, k) = ratio(ring.mul(ring.mul(e, x), e), e, p, mod);
    s.coords(1, k) = ratio(ring.mul(ring.mul(e, x), f), e12, p, mod);
    s.coords(2, k) = ratio(ring.mul(ring.mul(f, x), e), e21, p, mod);
    s.coords(3, k) = ratio(ring.mul(ring.mul(f, x), f), f, p, mod);
  }
  s.coords_inverse = inverse_mod_matrix(s.coords, mod);
  for (int k = 0; k < 4; ++k) s.images[static_cast<std::size_t>(k)] = s.apply(IntVec4::Unit(k));

  // Homomorphism on all basis products, identity and diagonal omega.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Mat2 lhs = s.apply(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      Mat2 rhs = s.images[static_cast<std::size_t>(i)] * s.images[static_cast<std::size_t>(j)];
      for (int r = 0; r < 2; ++r)
        for (int col = 0; col < 2; ++col)
          if (mod_floor(lhs(r, col) - rhs(r, col), mod) != 0) throw InternalError("p_splitting: not multiplicative");
    }
  Mat2 io = s.apply(one), iw = s.apply(w);
  if (io != Mat2::Identity() || iw(0, 1) != 0 || iw(1, 0) != 0 || iw(0, 0) != lam || iw(1, 1) != lam_bar)
    throw InternalError("p_splitting: normalization check failed");
  return s;
}

GrossPoint gross_point_ideal(const QuatOrder& order, const Splitting& s, int n, const BigInt& a) {
  GrossPoint gp;
  gp.n = n;
  if (n < 0) throw DomainError("gross_point_ideal: negative level");
  if (n == 0) {
    gp.ideal = RightIdeal{order.lattice, 1};
    return gp;
  }
  if (s.prec < 2 * n) throw PrecisionError("gross_point_ideal: splitting precision below 2n");
  const BigInt pn = ipow(BigInt(s.p), static_cast<unsigned>(n));
  const BigInt mod = pn * pn;
  gp.a = mod_floor(a, pn);
  if (gp.a % s.p == 0) throw DomainError("gross_point_ideal: parameter must be a unit");
  // x in p^-n R lies in P iff y = p^n x satisfies a Y21 = p^n Y11 and
  // a Y22 = p^n Y12 mod p^{2n}, Y = i_p(y).
  const BigInt c = mod_floor(pn * inverse_mod(gp.a, mod), mod);
  IntMat4 inv = s.coords_inverse;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv(i, j) = mod_floor(inv(i, j), mod);
  MatX4<BigInt> gens(6, 4);
  IntVec4 g1(1, 0, c, 0), g2(0, 1, 0, c);
  gens.row(0) = (inv * g1).transpose();
  gens.row(1) = (inv * g2).transpose();
  for (int i = 0; i < 4; ++i) {
    gens.row(2 + i).setZero();
    gens(2 + i, i) = mod;
  }
  IntMat4 l = hnf(gens);
  gp.ideal = RightIdeal{QuatLattice::from_generators(l * order.lattice.basis, order.lattice.denom * pn), 1};
  return gp;
}

PadicInt tree_twist(const Embedding& emb, const Splitting& s) {
  const std::int64_t p = s.p;
  const BigInt mod = s.modulus();
  for (std::int64_t y = 1; y <= p; ++y)
    for (std::int64_t x = -p; x <= p; ++x) {
      if (x * x + emb.t * x * y + emb.nr * y * y != p) continue;
      BigInt pi1 = mod_floor(x + y * s.lambda.residue(), mod);
      BigInt pi2 = mod_floor(x + y * s.lambda_bar.residue(), mod);
      if (pi1 % p != 0) std::swap(pi1, pi2);
      const BigInt low = mod / p;
      return PadicInt(p, s.prec - 1, mod_floor(pi2 * inverse_mod(pi1 / p, low), low));
    }
  throw ConstructionError("tree_twist: no element of norm p in O_K");
}

GrossClassifier::GrossClassifier(const ClassSet& classes, const Splitting& split, PadicInt twist)
    : classes_(classes), split_(split), twist_(std::move(twist)) {}

std::size_t GrossClassifier::classify_normalized(int n, const BigInt& a) {
  if (n == 0) return classify(0, a);
  if (twist_.prec() < n) throw PrecisionError("classify_normalized: twist known only to precision " +
                                              std::to_string(twist_.prec()));
  return classify(n, a * twist_.with_prec(n).pow(n).residue());
}

std::size_t GrossClassifier::classify(int n, const BigInt& a) {
  const BigInt key_a = n == 0 ? BigInt(0) : mod_floor(a, ipow(BigInt(split_.p), static_cast<unsigned>(n)));
  const auto key = std::make_pair(n, key_a);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  GrossPoint gp = gross_point_ideal(classes_.order, split_, n, key_a);
  RightIdeal red = reduce_representative(classes_.order.algebra, gp.ideal);
  const std::size_t idx = anticyc::classify(classes_, red);
  std::lock_guard lock(mutex_);
  memo_.emplace(key, idx);
  return idx;
}

std::vector<std::size_t> GrossClassifier::classify_all(int n, const std::vector<BigInt>& params, int threads) {
  std::vector<std::size_t> out(params.size());
  parallel_for(params.size(), threads, [&](std::size_t i) { out[i] = classify_normalized(n, params[i]); });
  return out;
}

std::vector<std::tuple<int, BigInt, std::size_t>> GrossClassifier::export_memo() const {
  std::lock_guard lock(mutex_);
  std::vector<std::tuple<int, BigInt, std::size_t>> out;
  for (const auto& [key, idx] : memo_) out.emplace_back(key.first, key.second, idx);
  return out;
}

void GrossClassifier::import_memo(const std::vector<std::tuple<int, BigInt, std::size_t>>& entries) {
  std::lock_guard lock(mutex_);
  for (const auto& [n, a, idx] : entries) {
    if (idx >= classes_.size()) throw ConfigError("gross memo: class index out of range");
    memo_[{n, a}] = idx;
  }
}

std::size_t GrossClassifier::memo_size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

}  // namespace anticyc
