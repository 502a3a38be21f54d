#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "anticyc/brandt.hpp"
#include "anticyc/curve.hpp"
#include "anticyc/gross.hpp"
#include "anticyc/theta.hpp"

namespace anticyc {

/// Bumped whenever class enumeration or Gross-point conventions change, so
/// stale cache files are ignored.
inline constexpr int kModelVersion = 1;

struct RunConfig {
  std::optional<std::string> curve_label;
  std::optional<CurveSpec> inline_curve;
  std::int64_t p = 0;
  std::int64_t delta = 0;
  int n = 2;
  std::optional<int> m;  ///< defaults to n
  std::optional<int> k;  ///< defaults to p
  std::optional<std::filesystem::path> cache_dir;
  bool use_cache = true;
  int threads = 1;
  ThetaFormula formula = ThetaFormula::kStandard;
  bool check_lower_level = true;
  bool swap_roots = false;
  bool conjugate_embedding = false;
  bool diagnostics = false;  ///< timings and cache counters in the report

  int out_m() const { return m.value_or(n); }
  int out_k() const { return k.value_or(static_cast<int>(p)); }
};

/// Range checks (p <= 31, 1 <= n <= 4, m <= n + 1, k <= p); ConfigError.
void validate_config(const RunConfig& cfg);

/// Working precision for level-n runs with output exponent m.
int working_precision(int n, int m);

/// --cache-dir, else ANTICYC_CACHE_DIR, else $HOME/.cache/anticyc.
std::filesystem::path resolve_cache_dir(const std::optional<std::filesystem::path>& flag);

struct CacheStats {
  int brandt_hits = 0;
  int brandt_misses = 0;
  int brandt_purged = 0;
  int gross_loaded = 0;
  int gross_computed = 0;
};

struct BrandtData {
  ClassSet classes;
  std::map<std::int64_t, BrandtMatrix> matrices;
};

/// Mass formula, matrix contracts and pairwise commutation; ConventionError
/// or InternalError on failure.
void validate_brandt_data(const BrandtData& data);

nlohmann::json to_json(const BrandtData& data);
BrandtData brandt_data_from_json(const nlohmann::json& j);

/// Disk cache of class sets and Brandt matrices keyed by (q, M, model version).
class BrandtCache {
 public:
  explicit BrandtCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {}

  /// `type` distinguishes Eichler orders of one level that are not conjugate
  /// (0 is the standard order built from the maximal order).
  std::filesystem::path path_for(std::int64_t q, std::int64_t level, std::size_t type = 0) const;
  /// Loads (validating) or computes the class set and B(ell) for `primes`.
  /// A file that fails validation is deleted and rebuilt.
  BrandtData get(std::int64_t q, std::int64_t level, const std::vector<std::int64_t>& primes, CacheStats& stats,
                 int threads = 1) const;
  BrandtData get(const QuatOrder& order, std::size_t type, const std::vector<std::int64_t>& primes,
                 CacheStats& stats, int threads = 1) const;

 private:
  std::optional<std::filesystem::path> dir_;
};

/// Writes via a temporary file and rename.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

/// Brandt matrices for a class set at the given primes (computed in parallel).
std::map<std::int64_t, BrandtMatrix> brandt_matrices(const ClassSet& classes, const std::vector<std::int64_t>& primes,
                                                     int threads);

struct Eigenform {
  VecX<BigInt> f;
  std::vector<std::int64_t> solve_primes;
  std::vector<std::int64_t> heldout_primes;
};

/// Solves for f_E with primes not dividing N, adding primes until the joint
/// eigenspace is a line, then verifies two further held-out primes.
Eigenform solve_eigenform(const CurveSpec& e, BrandtData& data, CacheStats& stats, int threads);

/// The assembled state for one (E, p, K) triple.
struct Setting {
  CurveSpec curve;
  SettingSpec spec;
  QuatOrder order;
  BrandtData brandt;
  Eigenform eigen;
  std::size_t order_type = 0;  ///< class index whose left order carries the embedding
  Embedding embedding;
  Splitting splitting;
  PadicInt twist;
  std::unique_ptr<GrossClassifier> classifier;
  int prec = 0;
};

CurveSpec resolve_curve(const RunConfig& cfg);

std::unique_ptr<Setting> build_setting(const RunConfig& cfg, CacheStats& stats);

struct RunResult {
  ThetaElement theta;
  std::optional<ThetaElement> previous;
  Verdict verdict;
  bool trivial_zero = false;
  std::optional<bool> consistent;
  nlohmann::json report;
};

RunResult run_compute(const RunConfig& cfg);

/// One row of the shipped tables.
struct TableRow {
  std::string label;
  std::int64_t p = 0;
  std::int64_t delta = 0;
  int n = 0;
  std::string tier;
  TruncPoly expected;
};

std::vector<TableRow> load_tables(const std::filesystem::path& path);

/// Tier order: fast < medium < slow; a row runs when its tier <= the requested one.
int tier_rank(const std::string& tier);

struct RowOutcome {
  TableRow row;
  bool pass = false;
  std::optional<OrbitWitness> witness;
  RunResult result;
  std::string error;
};

std::vector<RowOutcome> verify_tables(const std::vector<TableRow>& rows, const std::string& tier,
                                      const RunConfig& base);

}  // namespace anticyc
