#include "anticyc/quaternion.hpp"

#include "anticyc/linalg.hpp"

namespace anticyc {

// ---------------------------------------------------------------------------
// QuatLattice

QuatLattice QuatLattice::from_generators(const MatX4<BigInt>& gens, const BigInt& denom) {
  if (denom <= 0) throw DomainError("QuatLattice: denominator must be positive");
  QuatLattice out;
  out.basis = hnf(gens);
  BigInt g = denom;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g = gcd(g, out.basis(r, c));
  out.denom = denom / g;
  if (g != 1)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out.basis(r, c) /= g;
  return out;
}

QuatLattice QuatLattice::from_rational(const RatMat4& rows) {
  BigInt d = 1;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) d = lcm(d, denominator(rows(r, c)));
  MatX4<BigInt> gens(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) gens(r, c) = numerator(rows(r, c) * d);
  return from_generators(gens, d);
}

RatMat4 QuatLattice::rational_basis() const {
  RatMat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = BigRat(basis(r, c), denom);
  return out;
}

QuatElement QuatLattice::element(int i) const {
  QuatElement x;
  for (int c = 0; c < 4; ++c) x(c) = BigRat(basis(i, c), denom);
  return x;
}

RatVec4 QuatLattice::coordinates(const QuatElement& x) const {
  // Rows are upper triangular (HNF), so back-substitute on x = c^T * rows.
  RatVec4 c;
  RatMat4 b = rational_basis();
  RatVec4 rem = x;
  for (int col = 0; col < 4; ++col) {
    c(col) = rem(col) / b(col, col);
    for (int k = col; k < 4; ++k) rem(k) -= c(col) * b(col, k);
  }
  return c;
}

bool QuatLattice::contains(const QuatElement& x) const {
  RatVec4 c = coordinates(x);
  for (int i = 0; i < 4; ++i)
    if (denominator(c(i)) != 1) return false;
  return true;
}

bool QuatLattice::contains_lattice(const QuatLattice& other) const {
  for (int i = 0; i < 4; ++i)
    if (!contains(other.element(i))) return false;
  return true;
}

BigRat QuatLattice::covolume() const {
  BigRat d = 1;
  for (int i = 0; i < 4; ++i) d *= BigRat(basis(i, i), denom);
  return d;
}

QuatLattice QuatLattice::scaled(const BigRat& c) const {
  MatX4<BigInt> gens = basis * numerator(c);
  return from_generators(gens, denom * denominator(c));
}

// ---------------------------------------------------------------------------
// Hilbert symbols and the algebra

namespace {

std::int64_t strip(std::int64_t x, std::int64_t p, int& v) {
  v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return x;
}

int legendre(std::int64_t a, std::int64_t p) { return kronecker(a, p); }

}  // namespace

int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t v) {
  if (a == 0 || b == 0) throw DomainError("hilbert_symbol: arguments must be nonzero");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  int alpha = 0, beta = 0;
  std::int64_t u = strip(a, v, alpha);
  std::int64_t w = strip(b, v, beta);
  if (v == 2) {
    auto eps = [](std::int64_t x) { return static_cast<int>((((x - 1) / 2) % 2 + 2) % 2); };
    auto omega = [](std::int64_t x) {
      std::int64_t r = ((x % 16) + 16) % 16;
      return static_cast<int>(((r * r - 1) / 8) % 2);
    };
    int e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
    return (e % 2 == 0) ? 1 : -1;
  }
  int sign = ((alpha * beta) % 2 == 1 && ((v - 1) / 2) % 2 == 1) ? -1 : 1;
  if (beta % 2 == 1) sign *= legendre(u, v);
  if (alpha % 2 == 1) sign *= legendre(w, v);
  return sign;
}

AlgebraSpec build_algebra(std::int64_t q) {
  if (!is_prime(q)) throw ConstructionError("build_algebra: q must be prime");
  AlgebraSpec alg;
  alg.q = q;
  if (q == 2) {
    alg.a = -1;
    alg.b = -1;
  } else if (q % 4 == 3) {
    alg.a = -1;
    alg.b = -q;
  } else if (q % 8 == 5) {
    alg.a = -2;
    alg.b = -q;
  } else {
    std::int64_t r = 3;
    while (!(is_prime(r) && r % 4 == 3 && legendre(q, r) == -1)) r += 4;
    alg.a = -r;
    alg.b = -q;
  }
  // Ramification must be exactly {q, infinity}.
  std::vector<std::int64_t> places = prime_factors(2 * alg.a * alg.b);
  for (std::int64_t v : places) {
    int expected = (v == q) ? -1 : 1;
    if (hilbert_symbol(alg.a, alg.b, v) != expected)
      throw ConstructionError("build_algebra: wrong ramification at " + std::to_string(v));
  }
  if (hilbert_symbol(alg.a, alg.b, 0) != -1) throw ConstructionError("build_algebra: not definite");
  return alg;
}

// ---------------------------------------------------------------------------
// Orders

BigRat reduced_discriminant(const AlgebraSpec& alg, const QuatLattice& lat) {
  RatMat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = quat_pair<BigRat>(alg, lat.element(i), lat.element(j));
  BigRat det = abs(determinant_exact(g));
  BigInt num = sqrt(numerator(det)), den = sqrt(denominator(det));
  if (num * num != numerator(det) || den * den != denominator(det))
    throw ConstructionError("reduced_discriminant: trace-form determinant is not a square");
  return BigRat(num, den);
}

bool is_order(const AlgebraSpec& alg, const QuatLattice& lat) {
  QuatElement one(1, 0, 0, 0);
  if (!lat.contains(one)) return false;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!lat.contains(quat_mul<BigRat>(alg, lat.element(i), lat.element(j)))) return false;
  return true;
}

QuatOrder maximal_order(const AlgebraSpec& alg) {
  const std::int64_t q = alg.q;
  RatMat4 rows = RatMat4::Zero();
  auto set = [&](int r, BigRat x0, BigRat x1, BigRat x2, BigRat x3) {
    rows(r, 0) = x0;
    rows(r, 1) = x1;
    rows(r, 2) = x2;
    rows(r, 3) = x3;
  };
  const BigRat h(1, 2);
  if (q == 2) {
    set(0, 1, 0, 0, 0);
    set(1, 0, 1, 0, 0);
    set(2, 0, 0, 1, 0);
    set(3, h, h, h, h);
  } else if (alg.a == -1) {
    set(0, 1, 0, 0, 0);
    set(1, 0, 1, 0, 0);
    set(2, h, 0, h, 0);
    set(3, 0, h, 0, h);
  } else if (alg.a == -2) {
    set(0, h, 0, h, h);
    set(1, 0, BigRat(1, 4), h, BigRat(1, 4));
    set(2, 0, 0, 1, 0);
    set(3, 0, 0, 0, 1);
  } else {
    const std::int64_t r = -alg.a;
    std::int64_t c = 0;
    while ((c * c * q + 1) % r != 0) ++c;
    set(0, h, h, 0, 0);
    set(1, 0, 0, h, -h);
    set(2, 0, BigRat(1, r), 0, BigRat(-c, r));
    set(3, 0, 0, 0, 1);
  }
  QuatOrder o{alg, QuatLattice::from_rational(rows), 1};
  if (!is_order(alg, o.lattice)) throw ConstructionError("maximal_order: basis is not an order");
  if (reduced_discriminant(alg, o.lattice) != q)
    throw ConstructionError("maximal_order: reduced discriminant differs from q");
  return o;
}

namespace {

// Z/ell-coordinates of z in the lattice `sub` (which contains ell * super):
// the fractional parts of its coordinates, scaled by ell.
std::vector<std::int64_t> residue_coords(const QuatLattice& sub, const QuatElement& z, std::int64_t ell) {
  RatVec4 c = sub.coordinates(z);
  std::vector<std::int64_t> out(4);
  for (int i = 0; i < 4; ++i) {
    BigRat v = c(i) * ell;
    if (denominator(v) != 1) throw InternalError("residue_coords: lattice does not contain ell*O");
    out[static_cast<std::size_t>(i)] = mod_floor(numerator(v), ell).convert_to<std::int64_t>();
  }
  return out;
}

QuatOrder eichler_at_prime(const QuatOrder& order, std::int64_t ell) {
  const AlgebraSpec& alg = order.algebra;
  const QuatLattice& o = order.lattice;
  // An element of O, nonzero mod ell, with reduced norm divisible by ell.
  QuatElement x;
  bool found = false;
  for (std::int64_t idx = 1; idx < ell * ell * ell * ell && !found; ++idx) {
    std::int64_t t = idx;
    QuatElement cand = QuatElement::Zero();
    for (int i = 0; i < 4; ++i) {
      cand += BigRat(t % ell) * o.element(i);
      t /= ell;
    }
    if (numerator(quat_nrd<BigRat>(alg, cand)) % ell == 0) {
      x = cand;
      found = true;
    }
  }
  if (!found) throw ConstructionError("eichler_order: no isotropic element mod ell");

  // I = ell O + x O.
  MatX<BigRat> gens(8, 4);
  for (int i = 0; i < 4; ++i) {
    gens.row(i) = (BigRat(ell) * o.element(i)).transpose();
    gens.row(4 + i) = quat_mul<BigRat>(alg, x, o.element(i)).transpose();
  }
  BigInt d = 1;
  for (Eigen::Index r = 0; r < gens.rows(); ++r)
    for (int c = 0; c < 4; ++c) d = lcm(d, denominator(gens(r, c)));
  MatX4<BigInt> ig(8, 4);
  for (Eigen::Index r = 0; r < gens.rows(); ++r)
    for (int c = 0; c < 4; ++c) ig(r, c) = numerator(gens(r, c) * d);
  QuatLattice ideal = QuatLattice::from_generators(ig, d);
  if (ideal.covolume() / o.covolume() != BigRat(ell * ell))
    throw ConstructionError("eichler_order: auxiliary ideal has the wrong index");

  // Stabilizer {y in O : y I in I}, a linear condition mod ell.
  MatX<std::int64_t> cond(16, 4);
  for (int k = 0; k < 4; ++k)
    for (int g = 0; g < 4; ++g) {
      auto rc = residue_coords(ideal, quat_mul<BigRat>(alg, o.element(k), ideal.element(g)), ell);
      for (int t = 0; t < 4; ++t) cond(4 * g + t, k) = rc[static_cast<std::size_t>(t)];
    }
  auto kernel = nullspace_mod(cond, ell);
  if (kernel.size() != 3) throw ConstructionError("eichler_order: stabilizer has unexpected index");

  MatX4<BigInt> coords(7, 4);
  coords.setZero();
  for (std::size_t r = 0; r < kernel.size(); ++r)
    for (int c = 0; c < 4; ++c) coords(static_cast<Eigen::Index>(r), c) = kernel[r][static_cast<std::size_t>(c)];
  for (int c = 0; c < 4; ++c) coords(3 + c, c) = ell;
  IntMat4 sub = hnf(coords);
  RatMat4 rows = sub.cast<BigRat>() * o.rational_basis();
  QuatOrder out{alg, QuatLattice::from_rational(rows), order.level * ell};
  return out;
}

}  // namespace

QuatOrder eichler_order(const QuatOrder& maximal, std::int64_t level) {
  if (level < 1 || !is_squarefree(level)) throw ConstructionError("eichler_order: level must be squarefree");
  if (std::gcd(level, maximal.algebra.q) != 1) throw ConstructionError("eichler_order: level meets q");
  QuatOrder r = maximal;
  for (std::int64_t ell : prime_factors(level)) r = eichler_at_prime(r, ell);
  if (!is_order(r.algebra, r.lattice)) throw ConstructionError("eichler_order: result is not an order");
  if (reduced_discriminant(r.algebra, r.lattice) != BigRat(r.reduced_discriminant()))
    throw ConstructionError("eichler_order: wrong reduced discriminant");
  return r;
}

// ---------------------------------------------------------------------------
// Ideal arithmetic

QuatLattice lattice_product(const AlgebraSpec& alg, const QuatLattice& x, const QuatLattice& y) {
  MatX4<BigInt> gens(16, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      IntVec4 xi = x.basis.row(i).transpose();
      IntVec4 yj = y.basis.row(j).transpose();
      gens.row(4 * i + j) = quat_mul<BigInt>(alg, xi, yj).transpose();
    }
  return QuatLattice::from_generators(gens, x.denom * y.denom);
}

QuatLattice lattice_conjugate(const QuatLattice& x) {
  MatX4<BigInt> gens(4, 4);
  for (int i = 0; i < 4; ++i) {
    IntVec4 xi = x.basis.row(i).transpose();
    gens.row(i) = quat_conj<BigInt>(xi).transpose();
  }
  return QuatLattice::from_generators(gens, x.denom);
}

BigRat lattice_nrd(const AlgebraSpec& alg, const QuatLattice& x) {
  BigInt g = 0;
  for (int i = 0; i < 4; ++i) {
    IntVec4 xi = x.basis.row(i).transpose();
    g = gcd(g, quat_nrd<BigInt>(alg, xi));
    for (int j = i + 1; j < 4; ++j) {
      IntVec4 xj = x.basis.row(j).transpose();
      g = gcd(g, quat_pair<BigInt>(alg, xi, xj));
    }
  }
  return BigRat(g, x.denom * x.denom);
}

RightIdeal make_ideal(const AlgebraSpec& alg, const QuatLattice& lat) {
  return RightIdeal{lat, lattice_nrd(alg, lat)};
}

RightIdeal ideal_product(const AlgebraSpec& alg, const RightIdeal& i, const RightIdeal& j) {
  return make_ideal(alg, lattice_product(alg, i.lattice, j.lattice));
}

RightIdeal ideal_conjugate(const RightIdeal& i) { return RightIdeal{lattice_conjugate(i.lattice), i.nrd}; }

BigRat ideal_nrd(const AlgebraSpec& alg, const RightIdeal& i) { return lattice_nrd(alg, i.lattice); }

QuatLattice left_multiply(const AlgebraSpec& alg, const QuatElement& x, const QuatLattice& lat) {
  BigInt dx = 1;
  for (int c = 0; c < 4; ++c) dx = lcm(dx, denominator(x(c)));
  IntVec4 xi;
  for (int c = 0; c < 4; ++c) xi(c) = numerator(x(c) * dx);
  MatX4<BigInt> gens(4, 4);
  for (int r = 0; r < 4; ++r) {
    IntVec4 b = lat.basis.row(r).transpose();
    gens.row(r) = quat_mul<BigInt>(alg, xi, b).transpose();
  }
  return QuatLattice::from_generators(gens, dx * lat.denom);
}

RightIdeal principal_ideal(const QuatOrder& order, const QuatElement& x) {
  QuatLattice lat = left_multiply(order.algebra, x, order.lattice);
  return RightIdeal{lat, quat_nrd<BigRat>(order.algebra, x)};
}

QuatLattice left_order(const AlgebraSpec& alg, const RightIdeal& i) {
  return lattice_product(alg, i.lattice, lattice_conjugate(i.lattice)).scaled(1 / i.nrd);
}

QuatLattice right_order(const AlgebraSpec& alg, const RightIdeal& i) {
  return lattice_product(alg, lattice_conjugate(i.lattice), i.lattice).scaled(1 / i.nrd);
}

IntMat4 normalized_gram(const AlgebraSpec& alg, const QuatLattice& lat, const BigRat& nrd) {
  IntMat4 g;
  const BigRat scale = BigRat(lat.denom * lat.denom) * nrd;
  for (int i = 0; i < 4; ++i) {
    IntVec4 bi = lat.basis.row(i).transpose();
    for (int j = i; j < 4; ++j) {
      IntVec4 bj = lat.basis.row(j).transpose();
      BigRat v = BigRat(quat_pair<BigInt>(alg, bi, bj)) / scale;
      if (denominator(v) != 1) throw InternalError("normalized_gram: norm form is not integral");
      g(i, j) = numerator(v);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

nlohmann::json to_json(const QuatLattice& lat) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back(lat.basis(r, c).str());
    rows.push_back(row);
  }
  return {{"basis", rows}, {"denom", lat.denom.str()}};
}

QuatLattice quat_lattice_from_json(const nlohmann::json& j) {
  MatX4<BigInt> gens(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) gens(r, c) = BigInt(j.at("basis").at(r).at(c).get<std::string>());
  return QuatLattice::from_generators(gens, BigInt(j.at("denom").get<std::string>()));
}

}  // namespace anticyc
