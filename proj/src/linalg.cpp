#include "anticyc/linalg.hpp"

namespace anticyc {

MatX<BigRat> kernel_rational(MatX<BigRat> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    m.row(r).swap(m.row(piv));
    BigRat inv = 1 / m(r, c);
    m.row(r) *= inv;
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (k == r || m(k, c) == 0) continue;
      BigRat f = m(k, c);
      m.row(k) -= f * m.row(r);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  const Eigen::Index dim = cols - static_cast<Eigen::Index>(pivot_cols.size());
  MatX<BigRat> basis = MatX<BigRat>::Zero(cols, dim);
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      basis(pivot_cols[i], k) = -m(static_cast<Eigen::Index>(i), free);
    ++k;
  }
  return basis;
}

std::vector<std::vector<std::int64_t>> nullspace_mod(const MatX<std::int64_t>& input, std::int64_t p) {
  const Eigen::Index rows = input.rows(), cols = input.cols();
  MatX<std::int64_t> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = ((input(i, j) % p) + p) % p;
  auto inv = [p](std::int64_t a) {
    return inverse_mod(BigInt(a), BigInt(p)).convert_to<std::int64_t>();
  };
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    m.row(r).swap(m.row(piv));
    const std::int64_t s = inv(m(r, c));
    for (Eigen::Index j = 0; j < cols; ++j) m(r, j) = static_cast<std::int64_t>((static_cast<__int128>(m(r, j)) * s) % p);
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (k == r || m(k, c) == 0) continue;
      const std::int64_t f = m(k, c);
      for (Eigen::Index j = 0; j < cols; ++j)
        m(k, j) = static_cast<std::int64_t>(((m(k, j) - static_cast<__int128>(f) * m(r, j)) % p + p) % p);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<std::int64_t>> basis;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<std::int64_t> v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      v[static_cast<std::size_t>(pivot_cols[i])] = (p - m(static_cast<Eigen::Index>(i), free)) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

VecX<BigInt> primitive_integer_vector(const VecX<BigRat>& v) {
  BigInt d = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) d = lcm(d, denominator(v(i)));
  VecX<BigInt> out(v.size());
  BigInt g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = numerator(v(i) * d);
    g = gcd(g, out(i));
  }
  if (g == 0) return out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) /= g;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (out(i) == 0) continue;
    if (out(i) < 0) out = -out;
    break;
  }
  return out;
}

}  // namespace anticyc
