#include "anticyc/brandt.hpp"

#include <cmath>
#include <deque>

#include "anticyc/linalg.hpp"
#include "anticyc/parallel.hpp"

namespace anticyc {

BigRat ClassSet::mass() const {
  BigRat m = 0;
  for (auto w : weights) m += BigRat(1, w);
  return m;
}

BigRat eichler_mass(std::int64_t q, std::int64_t level) {
  BigRat m(q - 1, 12);
  for (std::int64_t ell : prime_factors(level)) m *= ell + 1;
  return m;
}

int fingerprint_length_for(std::int64_t reduced_disc) {
  // Roughly 2 pi^2 t^2 / disc vectors of normalized norm <= t; aim for a few dozen.
  const int t = static_cast<int>(std::ceil(1.5 * std::sqrt(static_cast<double>(reduced_disc))));
  return std::max(10, t);
}

namespace {

struct ReducedGram {
  IntMat4 transform;  // rows: reduced basis in lattice coordinates
  IntMat4 gram;       // even: v^T gram v = 2 Nrd / nrd
};

ReducedGram reduce(const AlgebraSpec& alg, const QuatLattice& lat, const BigRat& nrd) {
  IntMat4 g = normalized_gram(alg, lat, nrd);
  IntMat4 u = lll_gram(g);
  return {u, u * g * u.transpose()};
}

QuatElement element_of(const QuatLattice& lat, const IntMat4& transform, const Vec4<std::int64_t>& w) {
  RowVec4<BigInt> coords = w.cast<BigInt>().transpose() * transform;
  RowVec4<BigInt> ints = coords * lat.basis;
  QuatElement x;
  for (int c = 0; c < 4; ++c) x(c) = BigRat(ints(c), lat.denom);
  return x;
}

}  // namespace

Fingerprint fingerprint(const AlgebraSpec& alg, const RightIdeal& ideal, int length) {
  ReducedGram r = reduce(alg, ideal.lattice, ideal.nrd);
  auto counts = theta_series_even(r.gram, length);
  return Fingerprint(counts.begin() + 1, counts.end());
}

std::optional<QuatElement> is_equivalent(const AlgebraSpec& alg, const RightIdeal& i, const RightIdeal& j) {
  QuatLattice prod = lattice_product(alg, i.lattice, lattice_conjugate(j.lattice));
  ReducedGram r = reduce(alg, prod, i.nrd * j.nrd);
  for (const auto& w : enumerate_integral(r.gram, BigInt(2))) {
    if (w.isZero()) continue;
    QuatElement c = element_of(prod, r.transform, w);
    QuatElement b = c / j.nrd;
    if (left_multiply(alg, b, j.lattice) == i.lattice) return b;
    throw InternalError("is_equivalent: norm-minimal element does not generate");
  }
  return std::nullopt;
}

RightIdeal reduce_representative(const AlgebraSpec& alg, const RightIdeal& ideal) {
  ReducedGram r = reduce(alg, ideal.lattice, ideal.nrd);
  // The LLL basis contains a vector of norm at most a small multiple of the
  // minimum; enumerate up to it and pick the minimum deterministically.
  BigInt bound = r.gram(0, 0);
  for (int k = 1; k < 4; ++k) bound = std::min(bound, r.gram(k, k));
  Vec4<std::int64_t> best;
  BigInt best_val = -1;
  for (const auto& w : enumerate_integral(r.gram, bound)) {
    if (w.isZero()) continue;
    Vec4<BigInt> wb = w.cast<BigInt>();
    BigInt val = wb.dot(r.gram * wb);
    if (best_val < 0 || val < best_val ||
        (val == best_val && std::lexicographical_compare(w.data(), w.data() + 4, best.data(), best.data() + 4))) {
      best_val = val;
      best = w;
    }
  }
  QuatElement x = element_of(ideal.lattice, r.transform, best);
  QuatElement y = quat_conj<BigRat>(x) / ideal.nrd;
  RightIdeal out{left_multiply(alg, y, ideal.lattice), quat_nrd<BigRat>(alg, x) / ideal.nrd};
  return out;
}

std::vector<RightIdeal> neighbors(const QuatOrder& order, const RightIdeal& ideal, std::int64_t ell) {
  const AlgebraSpec& alg = order.algebra;
  const QuatLattice& lat = ideal.lattice;
  const QuatLattice& r = order.lattice;
  IntMat4 g = normalized_gram(alg, lat, ideal.nrd);
  std::vector<RightIdeal> out;
  const std::size_t want = static_cast<std::size_t>(ell + 1);

  // Projective points of P^3(F_ell): first nonzero coordinate equal to 1.
  Vec4<std::int64_t> v;
  for (int lead = 3; lead >= 0 && out.size() < want; --lead) {
    const std::int64_t count = ipow64(ell, static_cast<unsigned>(3 - lead));
    for (std::int64_t idx = 0; idx < count && out.size() < want; ++idx) {
      v.setZero();
      v(lead) = 1;
      std::int64_t t = idx;
      for (int c = lead + 1; c < 4; ++c) {
        v(c) = t % ell;
        t /= ell;
      }
      Vec4<BigInt> vb = v.cast<BigInt>();
      BigInt twice_q = vb.dot(g * vb);
      if ((twice_q / 2) % ell != 0) continue;
      // x = sum v_i b_i, J = ell I + x R.
      RowVec4<BigInt> x = vb.transpose() * lat.basis;
      MatX4<BigInt> gens(8, 4);
      for (int i = 0; i < 4; ++i) {
        gens.row(i) = lat.basis.row(i) * (r.denom * ell);
        IntVec4 rb = r.basis.row(i).transpose();
        gens.row(4 + i) = quat_mul<BigInt>(alg, IntVec4(x.transpose()), rb).transpose();
      }
      QuatLattice j = QuatLattice::from_generators(gens, lat.denom * r.denom);
      bool seen = false;
      for (const auto& o : out) seen = seen || o.lattice == j;
      if (!seen) out.push_back(RightIdeal{j, ideal.nrd * ell});
    }
  }
  if (out.size() != want) throw InternalError("neighbors: expected ell + 1 sub-ideals");
  return out;
}

std::int64_t unit_weight(const AlgebraSpec& alg, const RightIdeal& ideal) {
  QuatLattice ol = left_order(alg, ideal);
  ReducedGram r = reduce(alg, ol, 1);
  auto counts = theta_series_even(r.gram, 1);
  return counts[1] / 2;
}

std::size_t classify(const ClassSet& classes, const RightIdeal& ideal, const Fingerprint& fp) {
  const AlgebraSpec& alg = classes.order.algebra;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (classes.fingerprints[k] != fp) continue;
    if (is_equivalent(alg, ideal, classes.reps[k])) return k;
  }
  throw InternalError("classify: ideal matches no class representative");
}

std::size_t classify(const ClassSet& classes, const RightIdeal& ideal) {
  return classify(classes, ideal, fingerprint(classes.order.algebra, ideal, classes.fingerprint_length));
}

ClassSet enumerate_classes(const QuatOrder& order) {
  const AlgebraSpec& alg = order.algebra;
  ClassSet cs;
  cs.order = order;
  cs.fingerprint_length = fingerprint_length_for(order.reduced_discriminant());
  std::int64_t ell = 2;
  while ((order.algebra.q * order.level) % ell == 0) ell = next_prime(ell);
  cs.bfs_prime = ell;

  const BigRat target = eichler_mass(alg.q, order.level);
  auto add = [&](const RightIdeal& ideal, const Fingerprint& fp) {
    cs.reps.push_back(ideal);
    cs.weights.push_back(unit_weight(alg, ideal));
    cs.fingerprints.push_back(fp);
  };
  RightIdeal unit{order.lattice, 1};
  add(unit, fingerprint(alg, unit, cs.fingerprint_length));

  std::deque<std::size_t> queue{0};
  while (cs.mass() < target) {
    if (queue.empty()) throw InternalError("enumerate_classes: neighbour graph exhausted below the mass");
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (const auto& nb : neighbors(order, cs.reps[cur], ell)) {
      RightIdeal red = reduce_representative(alg, nb);
      Fingerprint fp = fingerprint(alg, red, cs.fingerprint_length);
      bool known = false;
      for (std::size_t k = 0; k < cs.size() && !known; ++k)
        known = cs.fingerprints[k] == fp && is_equivalent(alg, red, cs.reps[k]).has_value();
      if (known) continue;
      add(red, fp);
      queue.push_back(cs.size() - 1);
      if (cs.mass() >= target) break;
    }
  }
  if (cs.mass() != target) throw InternalError("enumerate_classes: mass overshoot");
  return cs;
}

BrandtMatrix brandt_matrix(const ClassSet& classes, std::int64_t ell, int threads) {
  const auto& order = classes.order;
  if ((order.algebra.q * order.level) % ell == 0)
    throw DomainError("brandt_matrix: ell divides the level");
  const auto h = static_cast<Eigen::Index>(classes.size());
  BrandtMatrix m{ell, MatX<std::int64_t>::Zero(h, h)};
  parallel_for(classes.size(), threads, [&](std::size_t i) {
    for (const auto& nb : neighbors(order, classes.reps[i], ell)) {
      RightIdeal red = reduce_representative(order.algebra, nb);
      m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(classify(classes, red)))++;
    }
  });
  validate_brandt(classes, m);
  return m;
}

void validate_brandt(const ClassSet& classes, const BrandtMatrix& m) {
  const Eigen::Index h = m.entries.rows();
  for (Eigen::Index i = 0; i < h; ++i) {
    if (m.entries.row(i).sum() != m.ell + 1)
      throw ConventionError("brandt_matrix: row sum differs from ell + 1");
    for (Eigen::Index j = 0; j < h; ++j) {
      const auto wi = classes.weights[static_cast<std::size_t>(i)];
      const auto wj = classes.weights[static_cast<std::size_t>(j)];
      if (m.entries(i, j) * wj != m.entries(j, i) * wi)
        throw ConventionError("brandt_matrix: weight-adjointness fails");
    }
  }
}

VecX<BigInt> eigenfunction(const std::vector<BrandtMatrix>& mats, const std::vector<std::int64_t>& eigs) {
  if (mats.empty() || mats.size() != eigs.size())
    throw DomainError("eigenfunction: need matching matrices and eigenvalues");
  const Eigen::Index h = mats.front().entries.rows();
  // Successively restrict: space = columns of `basis`.
  MatX<BigRat> basis = MatX<BigRat>::Identity(h, h);
  for (std::size_t t = 0; t < mats.size(); ++t) {
    MatX<BigRat> a = mats[t].entries.cast<BigInt>().cast<BigRat>();
    for (Eigen::Index i = 0; i < h; ++i) a(i, i) -= eigs[t];
    MatX<BigRat> img = a * basis;
    MatX<BigRat> ker = kernel_rational(img);
    if (ker.cols() == 0)
      throw EigenvalueMismatch("eigenfunction: no joint eigenvector for a_" + std::to_string(mats[t].ell) +
                               " = " + std::to_string(eigs[t]));
    basis = basis * ker;
  }
  if (basis.cols() > 1)
    throw AmbiguousEigenform("eigenfunction: joint eigenspace has dimension " + std::to_string(basis.cols()));
  return primitive_integer_vector(basis.col(0));
}

}  // namespace anticyc
