#include "anticyc/pipeline.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "anticyc/parallel.hpp"

namespace anticyc {

namespace fs = std::filesystem;

void validate_config(const RunConfig& cfg) {
  if (!cfg.curve_label && !cfg.inline_curve) throw ConfigError("no curve selected");
  if (cfg.p < 5 || cfg.p > 31) throw ConfigError("p must lie in [5, 31]");
  if (cfg.n < 1 || cfg.n > 4) throw ConfigError("n must lie in [1, 4]");
  if (cfg.out_m() < 1 || cfg.out_m() > cfg.n + 1) throw ConfigError("m must lie in [1, n + 1]");
  if (cfg.out_k() < 1 || cfg.out_k() > cfg.p) throw ConfigError("k must lie in [1, p]");
  if (cfg.threads < 1 || cfg.threads > 256) throw ConfigError("threads must lie in [1, 256]");
}

int working_precision(int n, int m) { return 2 * (n + 1) + m + 4; }

fs::path resolve_cache_dir(const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ANTICYC_CACHE_DIR")) return env;
  if (const char* home = std::getenv("HOME")) return fs::path(home) / ".cache" / "anticyc";
  return fs::path(".anticyc-cache");
}

void write_json_atomic(const fs::path& path, const nlohmann::json& j) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << j.dump(1) << '\n';
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

nlohmann::json matrix_json(const MatX<std::int64_t>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::int64_t> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

MatX<std::int64_t> matrix_from_json(const nlohmann::json& j) {
  const auto h = static_cast<Eigen::Index>(j.size());
  MatX<std::int64_t> m(h, h);
  for (Eigen::Index i = 0; i < h; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != h) throw ConfigError("Brandt matrix is not square");
    for (Eigen::Index c = 0; c < h; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<std::int64_t>();
  }
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void validate_brandt_data(const BrandtData& data) {
  const auto& cs = data.classes;
  if (cs.reps.empty() || cs.reps.size() != cs.weights.size() || cs.reps.size() != cs.fingerprints.size())
    throw InternalError("class set is incomplete");
  if (cs.mass() != eichler_mass(cs.order.algebra.q, cs.order.level))
    throw InternalError("class set violates the mass formula");
  for (const auto& [ell, m] : data.matrices) {
    if (m.entries.rows() != static_cast<Eigen::Index>(cs.size()) || m.ell != ell)
      throw ConventionError("Brandt matrix has the wrong shape");
    validate_brandt(cs, m);
  }
  for (auto it = data.matrices.begin(); it != data.matrices.end(); ++it)
    for (auto jt = std::next(it); jt != data.matrices.end(); ++jt) {
      const auto& a = it->second.entries;
      const auto& b = jt->second.entries;
      if (a * b != b * a) throw ConventionError("Brandt matrices B(" + std::to_string(it->first) + ") and B(" +
                                                std::to_string(jt->first) + ") do not commute");
    }
}

nlohmann::json to_json(const BrandtData& data) {
  const auto& cs = data.classes;
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t i = 0; i < cs.size(); ++i)
    classes.push_back({{"lattice", to_json(cs.reps[i].lattice)},
                       {"nrd", to_string(cs.reps[i].nrd)},
                       {"weight", cs.weights[i]},
                       {"fingerprint", cs.fingerprints[i]}});
  nlohmann::json mats = nlohmann::json::object();
  for (const auto& [ell, m] : data.matrices) mats[std::to_string(ell)] = matrix_json(m.entries);
  return {{"version", kModelVersion},
          {"q", cs.order.algebra.q},
          {"M", cs.order.level},
          {"algebra", {{"a", cs.order.algebra.a}, {"b", cs.order.algebra.b}}},
          {"order", to_json(cs.order.lattice)},
          {"fingerprint_length", cs.fingerprint_length},
          {"bfs_prime", cs.bfs_prime},
          {"classes", classes},
          {"matrices", mats}};
}

BrandtData brandt_data_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != kModelVersion) throw ConfigError("Brandt cache has another model version");
  BrandtData d;
  auto& cs = d.classes;
  cs.order.algebra.q = j.at("q").get<std::int64_t>();
  cs.order.algebra.a = j.at("algebra").at("a").get<std::int64_t>();
  cs.order.algebra.b = j.at("algebra").at("b").get<std::int64_t>();
  cs.order.level = j.at("M").get<std::int64_t>();
  cs.order.lattice = quat_lattice_from_json(j.at("order"));
  cs.fingerprint_length = j.at("fingerprint_length").get<int>();
  cs.bfs_prime = j.at("bfs_prime").get<std::int64_t>();
  for (const auto& c : j.at("classes")) {
    cs.reps.push_back(RightIdeal{quat_lattice_from_json(c.at("lattice")), parse_rational(c.at("nrd").get<std::string>())});
    cs.weights.push_back(c.at("weight").get<std::int64_t>());
    cs.fingerprints.push_back(c.at("fingerprint").get<Fingerprint>());
  }
  for (auto& [key, m] : j.at("matrices").items()) {
    const std::int64_t ell = std::stoll(key);
    d.matrices[ell] = BrandtMatrix{ell, matrix_from_json(m)};
  }
  return d;
}

fs::path BrandtCache::path_for(std::int64_t q, std::int64_t level, std::size_t type) const {
  std::string name = "brandt_q" + std::to_string(q) + "_M" + std::to_string(level);
  if (type) name += "_t" + std::to_string(type);
  return *dir_ / (name + "_v" + std::to_string(kModelVersion) + ".json");
}

std::map<std::int64_t, BrandtMatrix> brandt_matrices(const ClassSet& classes, const std::vector<std::int64_t>& primes,
                                                     int threads) {
  std::map<std::int64_t, BrandtMatrix> out;
  for (std::int64_t ell : primes) out[ell] = brandt_matrix(classes, ell, threads);
  return out;
}

BrandtData BrandtCache::get(std::int64_t q, std::int64_t level, const std::vector<std::int64_t>& primes,
                            CacheStats& stats, int threads) const {
  QuatOrder maximal = maximal_order(build_algebra(q));
  return get(level > 1 ? eichler_order(maximal, level) : maximal, 0, primes, stats, threads);
}

BrandtData BrandtCache::get(const QuatOrder& order, std::size_t type, const std::vector<std::int64_t>& primes,
                            CacheStats& stats, int threads) const {
  const std::int64_t q = order.algebra.q, level = order.level;
  std::optional<BrandtData> data;
  const bool cached = dir_.has_value();
  const fs::path path = cached ? path_for(q, level, type) : fs::path();
  if (cached && fs::exists(path)) {
    try {
      std::ifstream in(path);
      nlohmann::json j;
      in >> j;
      BrandtData loaded = brandt_data_from_json(j);
      if (loaded.classes.order.algebra != order.algebra || loaded.classes.order.level != level ||
          loaded.classes.order.lattice != order.lattice)
        throw ConfigError("cache describes another order");
      validate_brandt_data(loaded);
      data = std::move(loaded);
      ++stats.brandt_hits;
    } catch (const std::exception&) {
      fs::remove(path);
      ++stats.brandt_purged;
    }
  }
  bool dirty = false;
  if (!data) {
    ++stats.brandt_misses;
    data = BrandtData{enumerate_classes(order), {}};
    dirty = true;
  }
  std::vector<std::int64_t> missing;
  for (std::int64_t ell : primes)
    if (!data->matrices.count(ell)) missing.push_back(ell);
  if (!missing.empty()) {
    for (auto& [ell, m] : brandt_matrices(data->classes, missing, threads)) data->matrices[ell] = std::move(m);
    validate_brandt_data(*data);
    dirty = true;
  }
  if (cached && dirty) write_json_atomic(path, to_json(*data));
  return std::move(*data);
}

Eigenform solve_eigenform(const CurveSpec& e, BrandtData& data, CacheStats& stats, int threads) {
  (void)stats;
  const std::int64_t level = e.q * e.M;
  auto ensure = [&](std::int64_t ell) -> const BrandtMatrix& {
    auto it = data.matrices.find(ell);
    if (it == data.matrices.end()) {
      it = data.matrices.emplace(ell, brandt_matrix(data.classes, ell, threads)).first;
    }
    return it->second;
  };
  Eigenform out;
  std::vector<BrandtMatrix> mats;
  std::vector<std::int64_t> eigs;
  std::int64_t ell = 1;
  auto next_good = [&] {
    do ell = next_prime(ell);
    while (level % ell == 0);
    return ell;
  };
  for (int tries = 0; tries < 12; ++tries) {
    const std::int64_t l = next_good();
    mats.push_back(ensure(l));
    eigs.push_back(ap_point_count(e, l));
    out.solve_primes.push_back(l);
    try {
      out.f = eigenfunction(mats, eigs);
      break;
    } catch (const AmbiguousEigenform&) {
      if (tries == 11) throw;
    }
  }
  for (int held = 0; held < 2; ++held) {
    const std::int64_t l = next_good();
    const BrandtMatrix& b = ensure(l);
    const std::int64_t ap = ap_point_count(e, l);
    VecX<BigInt> lhs = b.entries.cast<BigInt>() * out.f;
    if (lhs != out.f * BigInt(ap))
      throw EigenvalueMismatch("held-out prime " + std::to_string(l) + ": B(ell) f != a_ell f");
    out.heldout_primes.push_back(l);
  }
  return out;
}

CurveSpec resolve_curve(const RunConfig& cfg) {
  if (cfg.inline_curve) {
    check_curve(*cfg.inline_curve);
    return *cfg.inline_curve;
  }
  return CurveRegistry::load_default().find(*cfg.curve_label);
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

fs::path gross_memo_path(const fs::path& dir, const Setting& s, const RunConfig& cfg) {
  std::ostringstream name;
  name << "gross_q" << s.curve.q << "_M" << s.curve.M << "_t" << s.order_type << "_p" << s.spec.p << "_d" << s.spec.delta
       << (cfg.swap_roots ? "_swap" : "") << (cfg.conjugate_embedding ? "_conj" : "") << "_v" << kModelVersion
       << ".json";
  return dir / name.str();
}

std::vector<std::string> element_json(const QuatElement& x) {
  std::vector<std::string> out;
  for (int c = 0; c < 4; ++c) out.push_back(to_string(x(c)));
  return out;
}

std::string classes_digest(const Setting& s) {
  return std::to_string(fnv1a(to_json(s.brandt).at("classes").dump()));
}

void load_gross_memo(const fs::path& path, Setting& s, CacheStats& stats) {
  if (!fs::exists(path)) return;
  try {
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    if (j.at("classes_digest").get<std::string>() != classes_digest(s)) throw ConfigError("stale memo");
    if (j.at("omega").get<std::vector<std::string>>() != element_json(s.embedding.omega))
      throw ConfigError("memo for another embedding");
    std::vector<std::tuple<int, BigInt, std::size_t>> entries;
    for (const auto& e : j.at("entries"))
      entries.emplace_back(e.at(0).get<int>(), BigInt(e.at(1).get<std::string>()), e.at(2).get<std::size_t>());
    s.classifier->import_memo(entries);
    stats.gross_loaded += static_cast<int>(entries.size());
  } catch (const std::exception&) {
    fs::remove(path);
  }
}

void save_gross_memo(const fs::path& path, const Setting& s) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [n, a, idx] : s.classifier->export_memo()) entries.push_back({n, a.str(), idx});
  nlohmann::json j;
  j["classes_digest"] = classes_digest(s);
  j["omega"] = element_json(s.embedding.omega);
  j["entries"] = std::move(entries);
  write_json_atomic(path, j);
}

}  // namespace

std::unique_ptr<Setting> build_setting(const RunConfig& cfg, CacheStats& stats) {
  auto s = std::make_unique<Setting>();
  s->curve = resolve_curve(cfg);
  s->prec = working_precision(cfg.n, cfg.out_m());
  s->spec = validate_setting(s->curve, cfg.p, cfg.delta, s->prec);
  std::optional<fs::path> dir;
  if (cfg.use_cache) dir = resolve_cache_dir(cfg.cache_dir);
  BrandtCache cache(dir);
  s->brandt = cache.get(s->curve.q, s->curve.M, {}, stats, cfg.threads);

  // O_K embeds optimally into some Eichler order of level M, not necessarily
  // into the standard one; otherwise move to the first left order that works.
  auto emb = find_optimal_embedding(s->brandt.classes.order, s->spec.disc_k);
  for (std::size_t j = 1; !emb && j < s->brandt.classes.size(); ++j) {
    const auto& base = s->brandt.classes;
    QuatOrder alt{base.order.algebra, left_order(base.order.algebra, base.reps[j]), base.order.level};
    if (auto e = find_optimal_embedding(alt, s->spec.disc_k)) {
      emb = e;
      s->order_type = j;
      s->brandt = cache.get(alt, j, {}, stats, cfg.threads);
    }
  }
  if (!emb) throw SearchBoundError("no Eichler order of level " + std::to_string(s->curve.M) +
                                   " contains an optimal embedding of O_K");

  const std::size_t before = s->brandt.matrices.size();
  s->eigen = solve_eigenform(s->curve, s->brandt, stats, cfg.threads);
  if (dir && s->brandt.matrices.size() != before) {
    validate_brandt_data(s->brandt);
    write_json_atomic(cache.path_for(s->curve.q, s->curve.M, s->order_type), to_json(s->brandt));
  }
  s->order = s->brandt.classes.order;
  s->embedding = *emb;
  if (cfg.conjugate_embedding) s->embedding = conjugate(s->embedding);
  s->splitting = p_splitting(s->order, s->embedding, cfg.p, s->prec, cfg.swap_roots);
  s->twist = tree_twist(s->embedding, s->splitting);
  s->classifier = std::make_unique<GrossClassifier>(s->brandt.classes, s->splitting, s->twist);
  if (dir) load_gross_memo(gross_memo_path(*dir, *s, cfg), *s, stats);
  return s;
}

RunResult run_compute(const RunConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  CacheStats stats;
  auto setting = build_setting(cfg, stats);
  const double t_setup = seconds_since(t0);
  const std::size_t memo_before = setting->classifier->memo_size();

  ThetaContext ctx;
  ctx.label = setting->curve.label;
  ctx.p = cfg.p;
  ctx.delta = cfg.delta;
  ctx.alpha = setting->spec.alpha;
  ctx.units_k = half_unit_count(setting->spec.disc_k);
  ctx.f = setting->eigen.f;
  ctx.classifier = setting->classifier.get();
  ctx.formula = cfg.formula;
  ctx.threads = cfg.threads;

  const auto t1 = std::chrono::steady_clock::now();
  RunResult r;
  r.theta = theta_element(ctx, cfg.n, cfg.out_m(), cfg.out_k());
  if (cfg.check_lower_level && cfg.n >= 2)
    r.previous = theta_element(ctx, cfg.n - 1, std::min(cfg.out_m(), cfg.n - 1), cfg.out_k());
  const double t_theta = seconds_since(t1);

  const int guard = 4;
  if (setting->curve.central_value_vanishes) {
    trivial_zero_check(r.theta, guard);
    if (r.previous) trivial_zero_check(*r.previous, guard);
    r.trivial_zero = true;
  }
  if (r.previous) r.consistent = consistency_check(r.theta, *r.previous);
  r.verdict = report_criterion(r.theta);
  stats.gross_computed = static_cast<int>(setting->classifier->memo_size() - memo_before);
  if (cfg.use_cache && stats.gross_computed > 0)
    save_gross_memo(gross_memo_path(resolve_cache_dir(cfg.cache_dir), *setting, cfg), *setting);

  nlohmann::json rep;
  rep["label"] = setting->curve.label;
  rep["p"] = cfg.p;
  rep["delta"] = cfg.delta;
  rep["D_K"] = setting->spec.disc_k;
  rep["n"] = cfg.n;
  rep["m"] = cfg.out_m();
  rep["k"] = cfg.out_k();
  rep["formula"] = to_string(cfg.formula);
  rep["q"] = setting->curve.q;
  rep["M"] = setting->curve.M;
  rep["class_number"] = setting->brandt.classes.size();
  rep["order_type"] = setting->order_type;
  rep["a_p"] = setting->spec.a_p;
  rep["alpha_p"] = setting->spec.alpha.residue().str();
  rep["working_precision"] = setting->prec;
  rep["eigenform_primes"] = setting->eigen.solve_primes;
  rep["heldout_primes"] = setting->eigen.heldout_primes;
  std::vector<std::string> coeffs;
  for (const auto& c : r.theta.series.coeffs()) coeffs.push_back(c.str());
  rep["coefficients"] = coeffs;
  rep["series"] = r.theta.series.to_string();
  rep["rho"] = r.verdict.rho ? nlohmann::json(*r.verdict.rho) : nlohmann::json(nullptr);
  rep["leading"] = r.verdict.leading.str();
  rep["leading_derivative"] = r.verdict.leading_derivative.str();
  rep["criterion"] = r.verdict.criterion;
  rep["note"] = r.verdict.note;
  rep["trivial_zero"] = setting->curve.central_value_vanishes ? nlohmann::json(r.trivial_zero) : nlohmann::json(nullptr);
  rep["consistency"] = r.consistent ? nlohmann::json(*r.consistent) : nlohmann::json(nullptr);
  if (r.previous) rep["previous_series"] = r.previous->series.to_string();
  if (cfg.diagnostics) {
    rep["timings"] = {{"setup_seconds", t_setup}, {"theta_seconds", t_theta}};
    rep["cache_stats"] = {{"brandt_hits", stats.brandt_hits},     {"brandt_misses", stats.brandt_misses},
                          {"brandt_purged", stats.brandt_purged}, {"gross_loaded", stats.gross_loaded},
                          {"gross_computed", stats.gross_computed}, {"memo_hits", setting->classifier->hits()}};
  }
  r.report = std::move(rep);
  return r;
}

std::vector<TableRow> load_tables(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("malformed table file: " + std::string(ex.what()));
  }
  std::vector<TableRow> rows;
  for (const auto& r : j) {
    TableRow row;
    row.label = r.at("label").get<std::string>();
    row.p = r.at("p").get<std::int64_t>();
    row.delta = r.at("delta").get<std::int64_t>();
    row.n = r.at("n").get<int>();
    row.tier = r.value("tier", std::string("slow"));
    tier_rank(row.tier);
    const int m = r.at("modulus").at("m").get<int>(), k = r.at("modulus").at("k").get<int>();
    std::vector<BigInt> coeffs;
    for (const auto& c : r.at("coefficients")) coeffs.emplace_back(c.get<std::string>());
    if (static_cast<int>(coeffs.size()) != k) throw ConfigError("table row " + row.label + ": expected k coefficients");
    row.expected = TruncPoly(row.p, m, k, coeffs);
    rows.push_back(std::move(row));
  }
  return rows;
}

int tier_rank(const std::string& tier) {
  if (tier == "fast") return 0;
  if (tier == "medium") return 1;
  if (tier == "slow") return 2;
  throw ConfigError("unknown tier '" + tier + "'");
}

std::vector<RowOutcome> verify_tables(const std::vector<TableRow>& rows, const std::string& tier,
                                      const RunConfig& base) {
  const int limit = tier_rank(tier);
  std::vector<RowOutcome> out;
  for (const auto& row : rows) {
    if (tier_rank(row.tier) > limit) continue;
    RowOutcome o;
    o.row = row;
    RunConfig cfg = base;
    cfg.curve_label = row.label;
    cfg.inline_curve.reset();
    cfg.p = row.p;
    cfg.delta = row.delta;
    cfg.n = row.n;
    cfg.m = row.expected.m();
    cfg.k = row.expected.k();
    try {
      o.result = run_compute(cfg);
      o.witness = orbit_match(o.result.theta.series, row.expected, row.n);
      o.pass = o.witness.has_value() && o.result.verdict.criterion;
      o.result.report["orbit_witness"] = o.witness ? to_json(*o.witness) : nlohmann::json(nullptr);
      o.result.report["expected"] = row.expected.to_string();
      o.result.report["match"] = o.pass;
      if (!o.witness)
        if (auto u = unit_scalar_match(o.result.theta.series, row.expected, row.n))
          o.result.report["unit_scalar"] = u->first.str();
    } catch (const Error& e) {
      o.error = std::string(e.name()) + ": " + e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace anticyc
