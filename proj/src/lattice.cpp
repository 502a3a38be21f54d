#include "anticyc/lattice.hpp"

#include <algorithm>
#include <array>

namespace anticyc {

IntMat4 hnf(const MatX4<BigInt>& generators) {
  std::vector<std::array<BigInt, 4>> rows;
  rows.reserve(static_cast<std::size_t>(generators.rows()));
  for (Eigen::Index r = 0; r < generators.rows(); ++r) {
    std::array<BigInt, 4> row;
    bool nonzero = false;
    for (int c = 0; c < 4; ++c) {
      row[static_cast<std::size_t>(c)] = generators(r, c);
      nonzero = nonzero || row[static_cast<std::size_t>(c)] != 0;
    }
    if (nonzero) rows.push_back(std::move(row));
  }

  auto sub = [](std::array<BigInt, 4>& a, const std::array<BigInt, 4>& b, const BigInt& q) {
    for (std::size_t c = 0; c < 4; ++c) a[c] -= q * b[c];
  };

  std::size_t top = 0;
  for (std::size_t col = 0; col < 4; ++col) {
    // Euclid on column `col` among rows [top, end).
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
      }
      if (best == rows.size()) throw RankError("hnf: generators do not span a rank-4 lattice");
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        sub(rows[r], rows[top], rows[r][col] / rows[top][col]);
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t r = 0; r < top; ++r) sub(rows[r], rows[top], floor_div(rows[r][col], rows[top][col]));
    // Drop rows that became zero.
    rows.erase(std::remove_if(rows.begin() + static_cast<std::ptrdiff_t>(top) + 1, rows.end(),
                              [](const std::array<BigInt, 4>& r) {
                                return r[0] == 0 && r[1] == 0 && r[2] == 0 && r[3] == 0;
                              }),
               rows.end());
    ++top;
  }
  if (rows.size() != 4) throw InternalError("hnf: unexpected leftover rows");

  IntMat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return out;
}

RatMat4 hnf(const RatMat4& basis, const BigInt& scale) {
  MatX4<BigInt> ints(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      BigRat v = basis(r, c) * scale;
      if (denominator(v) != 1) throw DomainError("hnf: scale does not clear denominators");
      ints(r, c) = numerator(v);
    }
  IntMat4 h = hnf(ints);
  RatMat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = BigRat(h(r, c), scale);
  return out;
}

namespace {

template <typename Scalar>
Scalar det4(const Mat4<Scalar>& m) {
  // Cofactor expansion along 2x2 minors; exact for rings.
  auto s = [&](int r, int c) -> const Scalar& { return m(r, c); };
  Scalar s0 = s(0, 0) * s(1, 1) - s(1, 0) * s(0, 1);
  Scalar s1 = s(0, 0) * s(1, 2) - s(1, 0) * s(0, 2);
  Scalar s2 = s(0, 0) * s(1, 3) - s(1, 0) * s(0, 3);
  Scalar s3 = s(0, 1) * s(1, 2) - s(1, 1) * s(0, 2);
  Scalar s4 = s(0, 1) * s(1, 3) - s(1, 1) * s(0, 3);
  Scalar s5 = s(0, 2) * s(1, 3) - s(1, 2) * s(0, 3);
  Scalar c5 = s(2, 2) * s(3, 3) - s(3, 2) * s(2, 3);
  Scalar c4 = s(2, 1) * s(3, 3) - s(3, 1) * s(2, 3);
  Scalar c3 = s(2, 1) * s(3, 2) - s(3, 1) * s(2, 2);
  Scalar c2 = s(2, 0) * s(3, 3) - s(3, 0) * s(2, 3);
  Scalar c1 = s(2, 0) * s(3, 2) - s(3, 0) * s(2, 2);
  Scalar c0 = s(2, 0) * s(3, 1) - s(3, 0) * s(2, 1);
  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

}  // namespace

BigRat lattice_index(const RatMat4& l1, const RatMat4& l2) {
  BigRat d1 = abs(det4(l1)), d2 = abs(det4(l2));
  if (d1 == 0 || d2 == 0) throw RankError("lattice_index: singular basis");
  return d2 / d1;
}

BigRat GramForm::value(const IntVec4& v) const {
  BigRat s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += matrix(i, j) * BigRat(v(i) * v(j));
  return s;
}

namespace {

// Leading principal minors D_0 = 1, ..., D_4 = det, computed exactly.
std::array<BigRat, 5> leading_minors(const RatMat4& g) {
  std::array<BigRat, 5> d;
  d[0] = 1;
  RatMat4 a = g;
  BigRat prod = 1;
  for (int k = 0; k < 4; ++k) {
    // Gaussian elimination without pivoting; fails (pivot <= 0) iff not PD.
    BigRat piv = a(k, k);
    prod *= piv;
    d[static_cast<std::size_t>(k) + 1] = prod;
    if (piv == 0) {
      for (int j = k + 1; j < 4; ++j) d[static_cast<std::size_t>(j) + 1] = 0;
      return d;
    }
    for (int i = k + 1; i < 4; ++i) {
      BigRat f = a(i, k) / piv;
      for (int j = k; j < 4; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

}  // namespace

bool GramForm::is_positive_definite() const {
  if (matrix != matrix.transpose()) return false;
  auto d = leading_minors(matrix);
  for (int k = 1; k <= 4; ++k)
    if (d[static_cast<std::size_t>(k)] <= 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Integral LLL (Cohen, Algorithm 2.6.7) driven by the Gram matrix.

namespace {

BigInt round_div(const BigInt& a, const BigInt& b) {
  // Nearest integer to a/b for b > 0; halves round down.
  return floor_div(2 * a + b, 2 * b);
}

}  // namespace

IntMat4 lll_gram(const IntMat4& gram) {
  constexpr int n = 4;
  IntMat4 g = gram;
  IntMat4 h = IntMat4::Identity();
  // 1-based indexing as in the reference description.
  std::array<BigInt, n + 1> d;
  std::array<std::array<BigInt, n + 1>, n + 1> lam;
  d[0] = 1;
  d[1] = g(0, 0);
  if (d[1] <= 0) throw DefinitenessError("lll_gram: form is not positive definite");

  auto gr = [&](int i, int j) -> BigInt& { return g(i - 1, j - 1); };

  auto red = [&](int k, int l) {
    if (abs(2 * lam[k][l]) <= d[l]) return;
    BigInt q = round_div(lam[k][l], d[l]);
    h.row(k - 1) -= q * h.row(l - 1);
    // Gram update for b_k <- b_k - q b_l.
    BigInt gkk = gr(k, k) - 2 * q * gr(k, l) + q * q * gr(l, l);
    for (int j = 1; j <= n; ++j) {
      if (j == k) continue;
      gr(k, j) -= q * gr(l, j);
      gr(j, k) = gr(k, j);
    }
    gr(k, k) = gkk;
    lam[k][l] -= q * d[l];
    for (int i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  int k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (int j = 1; j <= k; ++j) {
        BigInt u = gr(k, j);
        for (int i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k) {
          lam[k][j] = u;
        } else {
          if (u <= 0) throw DefinitenessError("lll_gram: form is not positive definite");
          d[k] = u;
        }
      }
    }
    red(k, k - 1);
    if (4 * d[k] * d[k - 2] < 3 * d[k - 1] * d[k - 1] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
      // Swap b_k and b_{k-1}.
      h.row(k - 1).swap(h.row(k - 2));
      g.row(k - 1).swap(g.row(k - 2));
      g.col(k - 1).swap(g.col(k - 2));
      for (int j = 1; j <= k - 2; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      BigInt l = lam[k][k - 1];
      BigInt b = (d[k - 2] * d[k] + l * l) / d[k - 1];
      for (int i = k + 1; i <= kmax; ++i) {
        BigInt t = lam[i][k];
        lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
        lam[i][k - 1] = (b * t + l * lam[i][k]) / d[k];
      }
      d[k - 1] = b;
      k = std::max(2, k - 1);
    } else {
      for (int l = k - 2; l >= 1; --l) red(k, l);
      ++k;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Exact enumeration through integral Schur complements.
//
// With D_k the k-th leading minor of G, the minimum of v^T G v over real
// x_0..x_{k-1} with x_k..x_3 fixed is (x_{>=k})^T T_k (x_{>=k}) / D_k, where
// T_k = D_k * (Schur complement of the leading k x k block) is integral.
// Level k therefore admits exactly the integers x_k with
//   a x_k^2 + b x_k + c <= D_k * bound,
// which form an interval around -b / 2a.

namespace {

template <typename Int>
struct SchurLevels {
  std::array<std::array<std::array<Int, 4>, 4>, 4> t;  // t[k] is (4-k)x(4-k)
  std::array<Int, 4> rhs;
};

template <typename Int>
Int to_int(const BigInt& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else {
    // Split into 62-bit limbs to build an __int128 exactly.
    BigInt a = abs(v);
    BigInt lo = a % (BigInt(1) << 62), hi = a >> 62;
    Int r = static_cast<Int>(hi.convert_to<std::int64_t>());
    r = (r << 62) + static_cast<Int>(lo.convert_to<std::int64_t>());
    return v < 0 ? -r : r;
  }
}

template <typename Int>
Int floor_div_int(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

template <typename Int>
void enumerate_levels(const SchurLevels<Int>& s, std::vector<Vec4<std::int64_t>>& out) {
  std::array<Int, 4> x{};
  auto level_eval = [&](int k, const Int& xk, Int& value) {
    const auto& t = s.t[static_cast<std::size_t>(k)];
    const int dim = 4 - k;
    Int b = 0, c = 0;
    for (int i = 1; i < dim; ++i) {
      b += t[0][static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(k + i)];
      for (int j = 1; j < dim; ++j)
        c += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             x[static_cast<std::size_t>(k + i)] * x[static_cast<std::size_t>(k + j)];
    }
    value = t[0][0] * xk * xk + 2 * b * xk + c;
    return b;
  };

  auto recurse = [&](auto&& self, int k) -> void {
    if (k < 0) {
      Vec4<std::int64_t> v;
      for (int i = 0; i < 4; ++i) v(i) = static_cast<std::int64_t>(x[static_cast<std::size_t>(i)]);
      out.push_back(v);
      return;
    }
    const Int a = s.t[static_cast<std::size_t>(k)][0][0];
    Int value;
    const Int half_b = level_eval(k, Int(0), value);
    const Int center = floor_div_int<Int>(-half_b, a);
    const Int& rhs = s.rhs[static_cast<std::size_t>(k)];
    for (Int xk = center;; --xk) {
      level_eval(k, xk, value);
      if (value > rhs) break;
      x[static_cast<std::size_t>(k)] = xk;
      self(self, k - 1);
    }
    for (Int xk = center + 1;; ++xk) {
      level_eval(k, xk, value);
      if (value > rhs) break;
      x[static_cast<std::size_t>(k)] = xk;
      self(self, k - 1);
    }
    x[static_cast<std::size_t>(k)] = 0;
  };
  recurse(recurse, 3);
}

}  // namespace

std::vector<Vec4<std::int64_t>> enumerate_integral(const IntMat4& gram, const BigInt& bound) {
  std::vector<Vec4<std::int64_t>> out;
  if (bound < 0) return out;
  RatMat4 g = gram.cast<BigRat>();
  auto d = leading_minors(g);
  for (int k = 1; k <= 4; ++k)
    if (d[static_cast<std::size_t>(k)] <= 0)
      throw DefinitenessError("short_vectors: form is not positive definite");

  std::array<Mat4<BigInt>, 4> t;
  std::array<BigInt, 4> rhs;
  BigInt max_abs = 0;
  for (int k = 0; k < 4; ++k) {
    const int dim = 4 - k;
    Mat4<BigInt> tk = Mat4<BigInt>::Zero();
    if (k == 0) {
      tk = gram;
    } else {
      MatX<BigRat> a = g.topLeftCorner(k, k);
      MatX<BigRat> bmat = g.block(0, k, k, dim);
      // Solve a * y = bmat by exact elimination.
      MatX<BigRat> y = bmat;
      MatX<BigRat> aa = a;
      for (int c = 0; c < k; ++c) {
        int piv = c;
        while (aa(piv, c) == 0) ++piv;
        aa.row(c).swap(aa.row(piv));
        y.row(c).swap(y.row(piv));
        for (int r = 0; r < k; ++r) {
          if (r == c || aa(r, c) == 0) continue;
          BigRat f = aa(r, c) / aa(c, c);
          aa.row(r) -= f * aa.row(c);
          y.row(r) -= f * y.row(c);
        }
      }
      for (int r = 0; r < k; ++r) y.row(r) /= aa(r, r);
      MatX<BigRat> schur = g.bottomRightCorner(dim, dim) - bmat.transpose() * y;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          BigRat v = schur(i, j) * d[static_cast<std::size_t>(k)];
          if (denominator(v) != 1) throw InternalError("enumerate: non-integral Schur complement");
          tk(i, j) = numerator(v);
        }
    }
    t[static_cast<std::size_t>(k)] = tk;
    rhs[static_cast<std::size_t>(k)] = numerator(d[static_cast<std::size_t>(k)]) * bound;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) max_abs = std::max(max_abs, abs(tk(i, j)));
    max_abs = std::max(max_abs, rhs[static_cast<std::size_t>(k)]);
  }

  // Coordinates satisfy |x_k|^2 <= bound * (G^{-1})_{kk} <= bound * D_3 (adjugate bound).
  BigInt coord_sq = bound * numerator(d[3]) * 64 + 64;
  BigInt worst = max_abs * coord_sq * 64;
  if (worst < (BigInt(1) << 120)) {
    SchurLevels<__int128> s;
    for (std::size_t k = 0; k < 4; ++k) {
      s.rhs[k] = to_int<__int128>(rhs[k]);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          s.t[k][i][j] = to_int<__int128>(t[k](static_cast<int>(i), static_cast<int>(j)));
    }
    enumerate_levels(s, out);
  } else {
    SchurLevels<BigInt> s;
    for (std::size_t k = 0; k < 4; ++k) {
      s.rhs[k] = rhs[k];
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) s.t[k][i][j] = t[k](static_cast<int>(i), static_cast<int>(j));
    }
    enumerate_levels(s, out);
  }
  return out;
}

namespace {

// Common denominator form: returns (integer matrix, scale) with
// scale * form.matrix integral.
std::pair<IntMat4, BigInt> integral_form(const GramForm& form) {
  BigInt l = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) l = lcm(l, denominator(form.matrix(i, j)));
  IntMat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = numerator(form.matrix(i, j) * l);
  return {m, l};
}

}  // namespace

std::vector<IntVec4> short_vectors(const GramForm& form, const BigRat& bound) {
  if (form.matrix != form.matrix.transpose())
    throw DefinitenessError("short_vectors: Gram matrix is not symmetric");
  auto [m, scale] = integral_form(form);
  BigRat scaled = bound * scale;
  BigInt ibound = numerator(scaled) / denominator(scaled);
  if (scaled < 0) return {};
  IntMat4 u = lll_gram(m);
  IntMat4 reduced = u * m * u.transpose();
  auto raw = enumerate_integral(reduced, ibound);
  std::vector<IntVec4> out;
  out.reserve(raw.size());
  IntMat4 ut = u.transpose();
  for (const auto& w : raw) {
    IntVec4 v = ut * w.cast<BigInt>();
    out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const IntVec4& a, const IntVec4& b) {
    return std::lexicographical_compare(a.data(), a.data() + 4, b.data(), b.data() + 4);
  });
  return out;
}

std::int64_t count_by_value(const GramForm& form, const BigRat& value) {
  std::int64_t n = 0;
  for (const auto& v : short_vectors(form, value))
    if (form.value(v) == value) ++n;
  return n;
}

std::vector<std::int64_t> theta_series_even(const IntMat4& gram, int max_t) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_t) + 1, 0);
  for (const auto& v : enumerate_integral(gram, BigInt(2 * max_t))) {
    Vec4<BigInt> w = v.cast<BigInt>();
    BigInt val = w.dot(gram * w);
    counts[static_cast<std::size_t>(val.convert_to<std::int64_t>() / 2)]++;
  }
  return counts;
}

}  // namespace anticyc
