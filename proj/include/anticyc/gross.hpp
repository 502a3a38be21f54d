#pragma once

#include <map>
#include <mutex>

#include "anticyc/parallel.hpp"
#include <optional>
#include <tuple>

#include "anticyc/brandt.hpp"
#include "anticyc/padic.hpp"

namespace anticyc {

/// omega in R with omega^2 - t omega + nr = 0, the image of the standard
/// generator of O_K (i, sqrt(-2), or (1 + sqrt(D))/2).
struct Embedding {
  QuatElement omega;
  std::int64_t t = 0;
  std::int64_t nr = 0;
};

using Mat2 = Eigen::Matrix<BigInt, 2, 2>;

/// i_p : R (x) Z_p -> M_2(Z_p) modulo p^prec with i_p(omega) = diag(lambda, lambda_bar).
struct Splitting {
  std::int64_t p = 0;
  int prec = 0;
  PadicInt lambda;
  PadicInt lambda_bar;
  /// Images of the four basis rows of R.
  std::array<Mat2, 4> images;
  /// Row-major entries (11, 12, 21, 22) of i_p in terms of R-coordinates:
  /// column k holds i_p(r_k).
  IntMat4 coords;
  IntMat4 coords_inverse;

  BigInt modulus() const { return ipow(BigInt(p), static_cast<unsigned>(prec)); }
  /// i_p of an element given by integral R-coordinates.
  Mat2 apply(const IntVec4& r_coords) const;
};

/// Integral structure constants of R: r_i r_j = sum_k c[i][j](k) r_k.
using StructureConstants = std::array<std::array<IntVec4, 4>, 4>;
StructureConstants structure_constants(const QuatOrder& order);

/// (t, nr) of the standard generator of O_K for D_K.
std::pair<std::int64_t, std::int64_t> minimal_polynomial(std::int64_t disc_k);

/// Lexicographically least (in R-coordinates) omega in R with the minimal
/// polynomial of O_K's generator. SearchBoundError if none has Nrd <= nr.
Embedding optimal_embedding(const QuatOrder& order, std::int64_t disc_k);
/// As above, but empty when this order type admits no embedding of O_K.
std::optional<Embedding> find_optimal_embedding(const QuatOrder& order, std::int64_t disc_k);

/// The conjugate embedding omega -> t - omega.
Embedding conjugate(const Embedding& emb);

/// Splitting with i_p(omega) diagonal. `swap_roots` selects the other root
/// as lambda. RamifiedSplitError when the roots agree mod p.
Splitting p_splitting(const QuatOrder& order, const Embedding& emb, std::int64_t p, int prec,
                      bool swap_roots = false);

struct GrossPoint {
  int n = 0;
  BigInt a = 0;  ///< parameter, reduced mod p^n
  RightIdeal ideal;
  std::optional<std::size_t> class_index;
};

/// P_n^a = (r_n(a) R^) cap B, r_n(a) = i_p^{-1}((1, a p^-n; 0, 1)).
GrossPoint gross_point_ideal(const QuatOrder& order, const Splitting& s, int n, const BigInt& a);

/// The unit kappa = pi_2 / (pi_1 / p), where pi in O_K has norm p and
/// i_p(pi) = diag(pi_1, pi_2) with p | pi_1. The forward p-neighbours of
/// P_n^c are the P_{n+1}^b with b = c kappa mod p^n, so Q_n^c := P_n^{c kappa^n}
/// satisfy the untwisted tree relation
///   sum_{b = c mod p^n} f(Q_{n+1}^b) = a_p f(Q_n^c) - f(Q_{n-1}^c).
/// Known to precision prec - 1.
PadicInt tree_twist(const Embedding& emb, const Splitting& s);

/// Memoized classification of Gross points, keyed by (n, a mod p^n).
class GrossClassifier {
 public:
  GrossClassifier(const ClassSet& classes, const Splitting& split, PadicInt twist);

  /// Class of P_n^a.
  std::size_t classify(int n, const BigInt& a);
  /// Class of the tree-normalized point Q_n^a = P_n^{a kappa^n}.
  std::size_t classify_normalized(int n, const BigInt& a);
  /// Classes of Q_n^{a_j} for all parameters, evaluated on `threads` workers.
  std::vector<std::size_t> classify_all(int n, const std::vector<BigInt>& params, int threads);

  std::size_t memo_size() const;

  /// Memo entries (n, a mod p^n, class), sorted; used for persistence.
  std::vector<std::tuple<int, BigInt, std::size_t>> export_memo() const;
  void import_memo(const std::vector<std::tuple<int, BigInt, std::size_t>>& entries);
  std::size_t hits() const { return hits_; }

 private:
  const ClassSet& classes_;
  const Splitting& split_;
  PadicInt twist_;
  mutable std::mutex mutex_;
  std::map<std::pair<int, BigInt>, std::size_t> memo_;
  std::size_t hits_ = 0;
};

}  // namespace anticyc
