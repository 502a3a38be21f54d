// End-to-end acceptance run: prints one PASS/FAIL/SKIP line per criterion.
//
//   acceptance [--expect-red=1,2] [--slow] [--threads=N]
//
// The slow table tier runs only with --slow or ANTICYC_SLOW=1. Criteria named
// in --expect-red are still evaluated and printed as FAIL when they fail, but
// do not make the process exit nonzero; an unexpected failure always does.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/LU>

#include "anticyc/brandt.hpp"
#include "anticyc/lattice.hpp"
#include "anticyc/pipeline.hpp"

using namespace anticyc;

namespace {

struct Line {
  int id;
  std::string title;
  enum { kPass, kFail, kSkip } state;
  std::string detail;
};

std::set<int> parse_ids(const std::string& csv) {
  std::set<int> out;
  std::stringstream ss(csv);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.insert(std::stoi(tok));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

Line table_criterion(int id, const std::string& title, const std::vector<RowOutcome>& rows) {
  int passed = 0;
  std::vector<std::string> bad;
  for (const auto& r : rows) {
    if (r.pass) {
      ++passed;
      continue;
    }
    std::string why = r.row.label + (r.error.empty() ? " mismatch" : " error: " + r.error);
    if (r.error.empty()) {
      if (auto sc = unit_scalar_match(r.result.theta.series, r.row.expected, r.row.n))
        why += " (matches after scaling by " + sc->first.str() + ")";
    }
    bad.push_back(why);
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(rows.size()) + " rows";
  if (!bad.empty()) detail += " [" + join(bad) + "]";
  return {id, title, bad.empty() ? Line::kPass : Line::kFail, detail};
}

// Every v in a box containing the ellipsoid v^T G v <= bound.
std::set<std::array<std::int64_t, 4>> box_oracle(const IntMat4& g, std::int64_t bound) {
  Eigen::Matrix4d gd;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gd(i, j) = g(i, j).convert_to<double>();
  const Eigen::Matrix4d inv = gd.inverse();
  std::array<std::int64_t, 4> r{};
  for (int i = 0; i < 4; ++i) r[i] = static_cast<std::int64_t>(std::sqrt(bound * inv(i, i))) + 1;
  std::set<std::array<std::int64_t, 4>> out;
  for (std::int64_t a = -r[0]; a <= r[0]; ++a)
    for (std::int64_t b = -r[1]; b <= r[1]; ++b)
      for (std::int64_t c = -r[2]; c <= r[2]; ++c)
        for (std::int64_t d = -r[3]; d <= r[3]; ++d) {
          IntVec4 v(a, b, c, d);
          if (v.dot(g * v) <= bound) out.insert({a, b, c, d});
        }
  return out;
}

std::vector<std::string> structural_failures(const std::filesystem::path& cache, int threads) {
  std::vector<std::string> fails;
  const auto registry = CurveRegistry::load_default();
  BrandtCache bc(cache);
  CacheStats stats;

  std::set<std::pair<std::int64_t, std::int64_t>> levels;
  for (const auto& e : registry.curves()) levels.insert({e.q, e.M});
  for (auto [q, level] : levels) {
    const std::string tag = "(q=" + std::to_string(q) + ", M=" + std::to_string(level) + ")";
    std::vector<std::int64_t> primes;
    for (std::int64_t ell : {2, 3, 5, 7, 13})
      if ((q * level) % ell != 0) primes.push_back(ell);
    try {
      BrandtData d = bc.get(q, level, primes, stats, threads);
      if (d.classes.mass() != eichler_mass(q, level)) fails.push_back("mass " + tag);
      for (auto ell : primes) {
        const auto& b = d.matrices.at(ell);
        for (Eigen::Index i = 0; i < b.entries.rows(); ++i) {
          if (b.entries.row(i).sum() != ell + 1) {
            fails.push_back("row sum B(" + std::to_string(ell) + ") " + tag);
            break;
          }
        }
        validate_brandt(d.classes, b);
      }
      for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
          const auto& a = d.matrices.at(primes[i]).entries;
          const auto& b = d.matrices.at(primes[j]).entries;
          if (a * b != b * a)
            fails.push_back("B(" + std::to_string(primes[i]) + "), B(" + std::to_string(primes[j]) +
                            ") do not commute " + tag);
        }
    } catch (const Error& ex) {
      fails.push_back(tag + " " + ex.what());
    }
  }

  for (const auto& e : registry.curves()) {
    try {
      BrandtData d = bc.get(e.q, e.M, {}, stats, threads);
      const Eigenform ef = solve_eigenform(e, d, stats, threads);
      if (ef.heldout_primes.size() < 2) fails.push_back("held-out primes " + e.label);
    } catch (const Error& ex) {
      fails.push_back("eigenform " + e.label + ": " + ex.what());
    }
  }

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-3, 3), bnd(5, 60);
  for (int t = 0; t < 100; ++t) {
    IntMat4 a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = coef(rng);
    IntMat4 g = a.transpose() * a;
    for (int i = 0; i < 4; ++i) g(i, i) += 1;
    const std::int64_t bound = bnd(rng);
    std::set<std::array<std::int64_t, 4>> got;
    for (const auto& v : enumerate_integral(g, BigInt(bound))) got.insert({v(0), v(1), v(2), v(3)});
    if (got != box_oracle(g, bound)) fails.push_back("short vectors differ from box oracle on form " + std::to_string(t));
  }

  const AlgebraSpec alg = build_algebra(11);
  const ClassSet cs = enumerate_classes(maximal_order(alg));
  auto w = cs.weights;
  std::sort(w.begin(), w.end());
  const auto b2 = brandt_matrix(cs, 2).entries;
  const bool ok11 = cs.size() == 2 && w == std::vector<std::int64_t>{2, 3} && b2.trace() == 1 &&
                    b2(0, 0) * b2(1, 1) - b2(0, 1) * b2(1, 0) == -6;  // roots 3 and -2
  if (!ok11) fails.push_back("q=11 Brandt module");
  return fails;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_red;
  bool slow = false;
  if (const char* env = std::getenv("ANTICYC_SLOW")) slow = std::string(env) == "1";
  int threads = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 2u, 8u));
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--expect-red=", 0) == 0) {
      expect_red = parse_ids(a.substr(13));
    } else if (a == "--slow") {
      slow = true;
    } else if (a.rfind("--threads=", 0) == 0) {
      threads = std::stoi(a.substr(10));
    } else {
      std::cerr << "unknown argument " << a << "\n";
      return 2;
    }
  }

  RunConfig base;
  base.cache_dir = std::filesystem::path(ANTICYC_TEST_CACHE);
  base.threads = threads;

  std::vector<Line> lines;
  try {
    const auto rows = load_tables(data_dir() / "tables.json");
    const auto outcomes = verify_tables(rows, slow ? "slow" : "medium", base);
    std::map<std::string, std::vector<RowOutcome>> by_tier;
    for (const auto& o : outcomes) by_tier[o.row.tier].push_back(o);

    lines.push_back(table_criterion(1, "fast table rows", by_tier["fast"]));
    lines.push_back(table_criterion(2, "medium table rows", by_tier["medium"]));
    if (slow)
      lines.push_back(table_criterion(3, "slow table rows", by_tier["slow"]));
    else
      lines.push_back({3, "slow table rows", Line::kSkip, "opt-in: --slow or ANTICYC_SLOW=1"});

    std::vector<std::string> rho_bad, zero_bad, cons_bad;
    for (const auto& o : outcomes) {
      if (!o.error.empty()) {
        rho_bad.push_back(o.row.label + " not computed");
        zero_bad.push_back(o.row.label + " not computed");
        if (o.row.tier == "fast") cons_bad.push_back(o.row.label + " not computed");
        continue;
      }
      const auto& v = o.result.verdict;
      if (!v.criterion || v.rho != 2 || v.leading == 0) rho_bad.push_back(o.row.label);
      if (!o.result.trivial_zero) zero_bad.push_back(o.row.label);
      if (o.row.tier == "fast" && o.result.consistent != true) cons_bad.push_back(o.row.label);
    }
    const std::string computed = std::to_string(outcomes.size()) + " computed rows";
    lines.push_back({4, "rho = 2 with nonzero leading term", rho_bad.empty() ? Line::kPass : Line::kFail,
                     rho_bad.empty() ? computed : join(rho_bad)});
    lines.push_back({5, "trivial zero Theta_n(0) = 0", zero_bad.empty() ? Line::kPass : Line::kFail,
                     zero_bad.empty() ? computed : join(zero_bad)});
    lines.push_back({6, "level consistency on fast rows", cons_bad.empty() ? Line::kPass : Line::kFail,
                     cons_bad.empty() ? std::to_string(by_tier["fast"].size()) + " rows" : join(cons_bad)});
  } catch (const Error& ex) {
    for (int id = static_cast<int>(lines.size()) + 1; id <= 6; ++id)
      lines.push_back({id, "table run", Line::kFail, ex.what()});
  }

  try {
    const auto fails = structural_failures(*base.cache_dir, threads);
    lines.push_back({7, "structural properties", fails.empty() ? Line::kPass : Line::kFail,
                     fails.empty() ? "mass, Brandt contracts, commutation, eigenforms, box oracle, q=11"
                                   : join(fails)});
  } catch (const Error& ex) {
    lines.push_back({7, "structural properties", Line::kFail, ex.what()});
  }

  try {
    RunConfig one = base;
    one.curve_label = "563a1";
    one.p = 5;
    one.delta = 1;
    one.n = 2;
    one.threads = 1;
    RunConfig many = one;
    many.threads = std::max(threads, 4);
    const std::string a = run_compute(one).report.dump();
    const std::string b = run_compute(many).report.dump();
    lines.push_back({8, "determinism across thread counts", a == b ? Line::kPass : Line::kFail,
                     "563a1 at 1 and " + std::to_string(many.threads) + " threads"});
  } catch (const Error& ex) {
    lines.push_back({8, "determinism across thread counts", Line::kFail, ex.what()});
  }

  bool ok = true;
  for (const auto& l : lines) {
    const char* state = l.state == Line::kPass ? "PASS" : l.state == Line::kFail ? "FAIL" : "SKIP";
    std::string suffix;
    if (l.state == Line::kFail) {
      if (expect_red.count(l.id))
        suffix = " (known red)";
      else
        ok = false;
    }
    std::cout << "criterion " << l.id << ": " << state << "  " << l.title << ": " << l.detail << suffix << "\n";
  }
  return ok ? 0 : 1;
}
