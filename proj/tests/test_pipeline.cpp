#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "anticyc/pipeline.hpp"

using namespace anticyc;
namespace fs = std::filesystem;

namespace {

RunConfig config(const std::string& label, std::int64_t p, std::int64_t delta, int n) {
  RunConfig cfg;
  cfg.curve_label = label;
  cfg.p = p;
  cfg.delta = delta;
  cfg.n = n;
  cfg.cache_dir = ANTICYC_TEST_CACHE;
  return cfg;
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("anticyc-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Cli {
  int code;
  std::string out;
};

Cli run_cli(const std::string& args) {
  const std::string cmd = std::string(ANTICYC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Config, RangeChecks) {
  RunConfig cfg = config("563a1", 5, 1, 2);
  EXPECT_NO_THROW(validate_config(cfg));
  auto bad = [&](auto mutate) {
    RunConfig c = cfg;
    mutate(c);
    EXPECT_THROW(validate_config(c), ConfigError);
  };
  bad([](RunConfig& c) { c.p = 37; });
  bad([](RunConfig& c) { c.n = 0; });
  bad([](RunConfig& c) { c.n = 5; });
  bad([](RunConfig& c) { c.m = 4; });
  bad([](RunConfig& c) { c.k = 6; });
  bad([](RunConfig& c) { c.threads = 0; });
  bad([](RunConfig& c) { c.curve_label.reset(); });
  EXPECT_EQ(working_precision(2, 2), 12);
}

TEST(Config, CacheDirPrecedence) {
  ::setenv("ANTICYC_CACHE_DIR", "/tmp/from-env", 1);
  EXPECT_EQ(resolve_cache_dir(fs::path("/tmp/flag")), fs::path("/tmp/flag"));
  EXPECT_EQ(resolve_cache_dir(std::nullopt), fs::path("/tmp/from-env"));
  ::unsetenv("ANTICYC_CACHE_DIR");
  ::setenv("HOME", "/home/someone", 1);
  EXPECT_EQ(resolve_cache_dir(std::nullopt), fs::path("/home/someone/.cache/anticyc"));
}

TEST(BrandtCache, IdempotentAndRoundTrips) {
  const fs::path dir = fresh_dir("idem");
  BrandtCache cache(dir);
  CacheStats s1, s2;
  BrandtData a = cache.get(11, 1, {2, 3}, s1);
  EXPECT_EQ(s1.brandt_misses, 1);
  EXPECT_EQ(a.classes.size(), 2u);
  BrandtData b = cache.get(11, 1, {2, 3}, s2);
  EXPECT_EQ(s2.brandt_hits, 1);
  EXPECT_EQ(s2.brandt_misses, 0);
  EXPECT_EQ(to_json(a), to_json(b));
  const nlohmann::json j = to_json(a);
  EXPECT_EQ(to_json(brandt_data_from_json(j)), j);
  fs::remove_all(dir);
}

TEST(BrandtCache, MassOfLevel563) {
  CacheStats stats;
  BrandtData d = BrandtCache(fs::path(ANTICYC_TEST_CACHE)).get(563, 1, {2, 3}, stats);
  EXPECT_EQ(d.classes.mass(), BigRat(281, 6));
  EXPECT_NO_THROW(validate_brandt_data(d));
}

TEST(BrandtCache, CorruptFilesArePurgedAndRebuilt) {
  const fs::path dir = fresh_dir("corrupt");
  BrandtCache cache(dir);
  CacheStats s0;
  const nlohmann::json good = to_json(cache.get(11, 1, {2}, s0));
  const fs::path path = cache.path_for(11, 1);

  std::ofstream(path) << "{ not json";
  CacheStats s1;
  EXPECT_EQ(to_json(cache.get(11, 1, {2}, s1)), good);
  EXPECT_EQ(s1.brandt_purged, 1);

  nlohmann::json tampered = good;
  tampered["matrices"]["2"][0][0] = tampered["matrices"]["2"][0][0].get<int>() + 1;
  std::ofstream(path) << tampered.dump();
  CacheStats s2;
  EXPECT_EQ(to_json(cache.get(11, 1, {2}, s2)), good);
  EXPECT_EQ(s2.brandt_purged, 1);
  fs::remove_all(dir);
}

TEST(Compute, ReportIsDeterministicAcrossThreadsAndCache) {
  RunConfig one = config("563a1", 5, 1, 2);
  RunConfig many = one;
  many.threads = 3;
  RunConfig uncached = one;
  uncached.use_cache = false;
  const std::string a = run_compute(one).report.dump();
  EXPECT_EQ(run_compute(many).report.dump(), a);
  EXPECT_EQ(run_compute(uncached).report.dump(), a);
  RunConfig diag = one;
  diag.diagnostics = true;
  nlohmann::json d = run_compute(diag).report;
  EXPECT_TRUE(d.contains("timings"));
  EXPECT_FALSE(nlohmann::json::parse(a).contains("timings"));
}

TEST(Compute, InlineCurveMatchesRegistry) {
  RunConfig byl = config("563a1", 5, 1, 2);
  RunConfig inl = byl;
  inl.curve_label.reset();
  inl.inline_curve = CurveRegistry::load_default().find("563a1");
  EXPECT_EQ(run_compute(inl).theta.series, run_compute(byl).theta.series);
}

TEST(Tables, ShippedFileHasAllRows) {
  auto rows = load_tables(data_dir() / "tables.json");
  ASSERT_EQ(rows.size(), 21u);
  int fast = 0, medium = 0, slow = 0;
  for (const auto& r : rows) {
    fast += r.tier == "fast";
    medium += r.tier == "medium";
    slow += r.tier == "slow";
    EXPECT_EQ(r.expected.k(), r.p);
    EXPECT_EQ(r.expected.m(), r.n);
    EXPECT_EQ(order_and_leading(r.expected).rho, 2) << r.label;
  }
  EXPECT_EQ(fast, 7);
  EXPECT_EQ(medium, 3);
  EXPECT_EQ(slow, 11);
  EXPECT_EQ(rows[3].expected.to_string(), "18*T^2 + 9*T^3 + 5*T^4 (mod 5^2, T^5)");
}

TEST(Tables, MalformedFileRejected) {
  const fs::path dir = fresh_dir("tables");
  std::ofstream(dir / "t.json") << R"([{"label": "563a1", "p": 5, "delta": 1, "n": 2, "modulus": {"m": 2, "k": 5}, "coefficients": ["0"]}])";
  EXPECT_THROW(load_tables(dir / "t.json"), ConfigError);
  std::ofstream(dir / "u.json") << "[";
  EXPECT_THROW(load_tables(dir / "u.json"), ConfigError);
  EXPECT_THROW(load_tables(dir / "missing.json"), ConfigError);
  EXPECT_THROW(tier_rank("huge"), ConfigError);
  fs::remove_all(dir);
}

TEST(Cli, ComputeReportsOrderTwo) {
  Cli r = run_cli("compute --curve 563a1 --p 5 --delta 1 --n 2 --cache-dir " ANTICYC_TEST_CACHE);
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rho"], 2);
  EXPECT_EQ(j["criterion"], true);
  EXPECT_EQ(j["trivial_zero"], true);
}

TEST(Cli, ExitCodesFollowErrorFamilies) {
  EXPECT_EQ(run_cli("compute --curve 389a1 --p 11 --delta 5 --no-cache").code, 14);
  EXPECT_EQ(run_cli("compute --curve 99z9 --p 5 --delta 1 --no-cache").code, 17);
  EXPECT_EQ(run_cli("compute --curve 563a1 --p 7 --delta 1 --no-cache").code, 12);
  EXPECT_EQ(run_cli("compute --curve 563a1 --p 37 --delta 1 --no-cache").code, 18);
  EXPECT_EQ(run_cli("compute --curve 563a1 --bogus").code, 18);
  EXPECT_EQ(run_cli("verify-tables --tier enormous").code, 18);
  EXPECT_EQ(run_cli("brandt-cache --q 12 --no-cache").code, 10);
}

TEST(Cli, CurveFileInput) {
  const fs::path dir = fresh_dir("cli");
  std::ofstream(dir / "e.json") << to_json(CurveRegistry::load_default().find("1171a1")).dump();
  Cli r = run_cli("compute --curve-file " + (dir / "e.json").string() + " --p 5 --delta 1 --cache-dir " ANTICYC_TEST_CACHE);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["rho"], 2);
  std::ofstream(dir / "bad.json") << R"({"a_invariants": [1, 2]})";
  EXPECT_EQ(run_cli("compute --curve-file " + (dir / "bad.json").string() + " --p 5 --delta 1 --no-cache").code, 18);
  fs::remove_all(dir);
}

TEST(Cli, BrandtCacheIsIdempotent) {
  const fs::path dir = fresh_dir("clicache");
  Cli first = run_cli("brandt-cache --q 11 --M 1 --primes 2,3 --cache-dir " + dir.string());
  ASSERT_EQ(first.code, 0);
  auto j = nlohmann::json::parse(first.out);
  EXPECT_EQ(j["class_number"], 2);
  EXPECT_EQ(j["cache_hit"], false);
  Cli second = run_cli("brandt-cache --q 11 --M 1 --primes 2,3 --cache-dir " + dir.string());
  EXPECT_EQ(nlohmann::json::parse(second.out)["cache_hit"], true);
  EXPECT_EQ(nlohmann::json::parse(second.out)["matrices"], j["matrices"]);
  fs::remove_all(dir);
}
