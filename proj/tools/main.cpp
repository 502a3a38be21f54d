#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "anticyc/pipeline.hpp"

using namespace anticyc;

namespace {

enum class Format { kJson, kText };

void emit(const nlohmann::json& j, Format fmt) {
  if (fmt == Format::kJson) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (auto& [key, v] : j.items()) std::cout << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

int report_error(const std::string& kind, const std::string& what, int code) {
  nlohmann::json err{{"error", kind}, {"message", what}, {"exit_code", code}};
  std::cerr << err.dump() << '\n';
  return code;
}

CurveSpec read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file " + path);
  try {
    nlohmann::json j;
    in >> j;
    return curve_from_json(j);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("malformed curve file: " + std::string(ex.what()));
  }
}

std::vector<std::int64_t> parse_primes(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad prime list entry '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anticyclotomic theta elements of rank-2 elliptic curves"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string curve_label, curve_file, cache_dir, formula = "standard", fmt_name = "json", tier = "fast";
  std::string tables_path;
  int m = 0, k = 0;
  bool no_cache = false;
  std::int64_t bq = 0, bm = 1;
  std::string bprimes = "2,3";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cache-dir", cache_dir, "cache directory (else ANTICYC_CACHE_DIR or ~/.cache/anticyc)");
    sub->add_flag("--no-cache", no_cache, "do not read or write the cache");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--format", fmt_name, "output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--diagnostics", cfg.diagnostics, "include timings and cache counters");
  };

  auto* compute = app.add_subcommand("compute", "compute one theta element and the order-2 criterion");
  auto* sel = compute->add_option_group("curve");
  sel->add_option("--curve", curve_label, "registry label");
  sel->add_option("--curve-file", curve_file, "JSON file with an inline curve");
  sel->require_option(1);
  compute->add_option("--p", cfg.p, "split ordinary prime")->required();
  compute->add_option("--delta", cfg.delta, "K = Q(sqrt(-delta))")->required();
  compute->add_option("--n", cfg.n, "level");
  compute->add_option("--m", m, "output modulus exponent (default n)");
  compute->add_option("--k", k, "output truncation T^k (default p)");
  compute->add_option("--formula", formula, "regularization")->check(CLI::IsMember({"standard", "displayed"}));
  compute->add_flag("--swap-roots", cfg.swap_roots, "exchange the roots defining i_p");
  compute->add_flag("--conjugate-embedding", cfg.conjugate_embedding, "use the conjugate optimal embedding");
  add_common(compute);

  auto* verify = app.add_subcommand("verify-tables", "recompute the shipped tables and compare up to symmetry");
  verify->add_option("--tier", tier, "cost tier")->check(CLI::IsMember({"fast", "medium", "slow"}));
  verify->add_option("--tables", tables_path, "table file (default: data dir)");
  verify->add_option("--formula", formula, "regularization")->check(CLI::IsMember({"standard", "displayed"}));
  add_common(verify);

  auto* cache = app.add_subcommand("brandt-cache", "populate and validate a Brandt module cache entry");
  cache->add_option("--q", bq, "ramified prime")->required();
  cache->add_option("--M", bm, "Eichler level");
  cache->add_option("--primes", bprimes, "comma-separated Hecke primes");
  add_common(cache);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("ConfigError", e.what(), static_cast<int>(ErrorCode::kConfig));
  }

  const Format fmt = fmt_name == "json" ? Format::kJson : Format::kText;
  try {
    cfg.formula = theta_formula_from_string(formula);
    cfg.use_cache = !no_cache;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;

    if (*compute) {
      if (!curve_label.empty()) cfg.curve_label = curve_label;
      else cfg.inline_curve = read_curve_file(curve_file);
      if (m) cfg.m = m;
      if (k) cfg.k = k;
      RunResult r = run_compute(cfg);
      emit(r.report, fmt);
      return 0;
    }

    if (*verify) {
      auto rows = load_tables(tables_path.empty() ? data_dir() / "tables.json" : std::filesystem::path(tables_path));
      auto outcomes = verify_tables(rows, tier, cfg);
      nlohmann::json summary;
      nlohmann::json list = nlohmann::json::array();
      int passed = 0, errors = 0;
      for (const auto& o : outcomes) {
        nlohmann::json row{{"label", o.row.label}, {"p", o.row.p}, {"delta", o.row.delta}, {"n", o.row.n},
                           {"pass", o.pass}, {"expected", o.row.expected.to_string()}};
        if (!o.error.empty()) {
          row["error"] = o.error;
          ++errors;
        } else {
          row["computed"] = o.result.theta.series.to_string();
          row["rho"] = o.result.report["rho"];
          row["orbit_witness"] = o.result.report["orbit_witness"];
          row["consistency"] = o.result.report["consistency"];
          if (o.result.report.contains("unit_scalar")) row["unit_scalar"] = o.result.report["unit_scalar"];
        }
        passed += o.pass;
        list.push_back(row);
      }
      summary["tier"] = tier;
      summary["formula"] = formula;
      summary["rows"] = list;
      summary["passed"] = passed;
      summary["total"] = outcomes.size();
      summary["all_pass"] = passed == static_cast<int>(outcomes.size());
      if (fmt == Format::kJson) {
        std::cout << summary.dump(2) << '\n';
      } else {
        for (const auto& r : list)
        {
          std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["label"].get<std::string>() << " p=" << r["p"]
                    << " delta=" << r["delta"] << " n=" << r["n"];
          if (r.contains("unit_scalar")) std::cout << " (matches after scaling by " << r["unit_scalar"].get<std::string>() << ")";
          if (r.contains("error")) std::cout << " " << r["error"].get<std::string>();
          std::cout << '\n';
        }
        std::cout << passed << "/" << outcomes.size() << " rows match\n";
      }
      if (passed == static_cast<int>(outcomes.size())) return 0;
      return errors == static_cast<int>(outcomes.size()) - passed && errors > 0
                 ? static_cast<int>(ErrorCode::kOracle)
                 : static_cast<int>(ErrorCode::kTableMismatch);
    }

    if (*cache) {
      if (bq < 2 || !is_prime(bq)) throw ValidationError("q must be prime");
      if (bm < 1 || bm % bq == 0 || !is_squarefree(bm)) throw ValidationError("M must be squarefree and prime to q");
      auto primes = parse_primes(bprimes);
      for (auto ell : primes)
        if (!is_prime(ell) || (bq * bm) % ell == 0) throw ValidationError("Hecke primes must be prime to qM");
      BrandtCache bc(cfg.use_cache ? std::optional(resolve_cache_dir(cfg.cache_dir)) : std::nullopt);
      CacheStats stats;
      BrandtData d = bc.get(bq, bm, primes, stats, cfg.threads);
      nlohmann::json out{{"q", bq},
                         {"M", bm},
                         {"class_number", d.classes.size()},
                         {"mass", to_string(d.classes.mass())},
                         {"weights", d.classes.weights},
                         {"primes", primes},
                         {"cache_hit", stats.brandt_hits > 0 && stats.brandt_misses == 0}};
      if (cfg.use_cache) out["path"] = bc.path_for(bq, bm).string();
      nlohmann::json mats = nlohmann::json::object();
      for (auto ell : primes) {
        const auto& e = d.matrices.at(ell).entries;
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < e.rows(); ++i) {
          std::vector<std::int64_t> r;
          for (Eigen::Index j = 0; j < e.cols(); ++j) r.push_back(e(i, j));
          rows.push_back(r);
        }
        mats[std::to_string(ell)] = rows;
      }
      out["matrices"] = mats;
      if (cfg.diagnostics)
        out["cache_stats"] = {{"hits", stats.brandt_hits}, {"misses", stats.brandt_misses}, {"purged", stats.brandt_purged}};
      emit(out, fmt);
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e.name(), e.what(), e.exit_code());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("ConfigError", e.what(), static_cast<int>(ErrorCode::kConfig));
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), static_cast<int>(ErrorCode::kInternal));
  }
  return 0;
}
