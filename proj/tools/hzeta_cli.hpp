#pragma once

// Command-line front end. Kept header-only so tests can drive run() with
// string streams.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hzeta/hzeta.hpp"

namespace hzeta::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2 };

struct Report {
  std::string command;
  Json params = Json::object();
  std::vector<Json> results;
  std::optional<long double> error_bound;
  std::optional<std::string> status;  // MATCH / MISMATCH, PASS / FAIL
};

inline Json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max()) {
    return static_cast<i64>(v);
  }
  return v.str();
}

inline Json real_json(long double v) { return static_cast<double>(v); }

inline std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    return os.str();
  }
  if (v.is_null()) return "";
  return v.dump();
}

inline std::string csv_cell(const Json& v) {
  std::string s = cell(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::vector<std::string> columns(const std::vector<Json>& rows) {
  std::vector<std::string> cols;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.items()) {
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    }
  }
  return cols;
}

inline void emit(const Report& rep, const std::string& format, std::ostream& out) {
  if (format == "json") {
    Json j;
    j["command"] = rep.command;
    j["params"] = rep.params;
    j["results"] = rep.results;
    if (rep.error_bound) j["error_bound"] = real_json(*rep.error_bound);
    if (rep.status) j["status"] = *rep.status;
    out << j.dump(2) << "\n";
    return;
  }
  const auto cols = columns(rep.results);
  if (format == "csv") {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out << (i ? "," : "") << cols[i];
    }
    out << "\n";
    for (const auto& r : rep.results) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << (r.contains(cols[i]) ? csv_cell(r[cols[i]]) : "");
      }
      out << "\n";
    }
    return;
  }
  // human: aligned columns
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) width[i] = cols[i].size();
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rep.results) {
    std::vector<std::string> line;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      line.push_back(r.contains(cols[i]) ? cell(r[cols[i]]) : "");
      width[i] = std::max(width[i], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto row = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << line[i];
    }
    out << "\n";
  };
  row(cols);
  for (const auto& line : cells) row(line);
  if (rep.error_bound) {
    out << "error bound: " << std::setprecision(3)
        << static_cast<double>(*rep.error_bound) << "\n";
  }
  if (rep.status) out << *rep.status << "\n";
}

struct Options {
  std::string format = "human";
  std::string cache_path;
  unsigned threads = 1;

  std::string alpha, beta, gamma;

  u64 B = 1;
  i64 A = 1;
  u64 limit = 1000;
  std::string method = "formula";

  u64 index = 1;

  u64 prime_limit = kDefaultPrimeLimit;
  u64 b = 1;
  double s = 2.0;
  std::string mode = "general";

  std::string suite = "all";
  u64 seed = 20240611;
  std::optional<u64> verify_limit;
};

class Context {
 public:
  explicit Context(const Options& o) {
    if (!o.cache_path.empty()) cache_ = std::make_unique<Cache>(o.cache_path);
  }

  SieveTables sieve(u64 n) { return cache_ ? cache_->sieve(n) : SieveTables(n); }

  ClassProvider classes(u64 prime_limit) {
    if (cache_) {
      Cache* c = cache_.get();
      return [c, prime_limit](u64 b) { return c->classes(b, prime_limit); };
    }
    return default_classes(prime_limit);
  }

 private:
  std::unique_ptr<Cache> cache_;
};

inline BigInt parse_big(const std::string& s, const char* name) {
  try {
    if (s.empty()) throw std::runtime_error("empty");
    return BigInt(s);
  } catch (const std::exception&) {
    throw UsageError(std::string("--") + name + " must be an integer, got '" + s + "'");
  }
}

inline Report cmd_canonicalize(const Options& o) {
  const BasisTriple t{parse_big(o.alpha, "alpha"), parse_big(o.beta, "beta"),
                      parse_big(o.gamma, "gamma")};
  const CanonicalLattice l = canonicalize(t);
  const auto g = gram(l);
  Report rep;
  rep.command = "canonicalize";
  rep.params = {{"alpha", o.alpha}, {"beta", o.beta}, {"gamma", o.gamma}};
  auto q = [](const BigRational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
  };
  rep.results.push_back({{"n", big_json(l.n)},
                         {"A", big_json(l.A)},
                         {"B", big_json(l.B)},
                         {"invariant_B", big_json(invariant_B(l))},
                         {"g11", q(g[0])},
                         {"g12", q(g[1])},
                         {"g22", q(g[3])}});
  return rep;
}

inline Report cmd_coeffs(const Options& o, Context& ctx) {
  if (o.B == 0) throw UsageError("--B must be positive");
  if (o.limit == 0) throw UsageError("--limit must be positive");
  if (o.method != "formula" && o.method != "brute" && o.method != "both") {
    throw UsageError("--method must be formula, brute or both");
  }
  const bool formula = o.method != "brute";
  const bool brute = o.method != "formula";
  if (brute) require_coprime(o.A, static_cast<i64>(o.B));

  Report rep;
  rep.command = "coeffs";
  rep.params = {{"B", o.B}, {"limit", o.limit}, {"method", o.method}};
  if (brute) rep.params["A"] = o.A;

  std::optional<DirichletCoeffs> f;
  if (formula) f = theorem11_coeffs(o.B, ctx.sieve(o.limit), o.limit);
  bool match = true;
  for (u64 m = 1; m <= o.limit; ++m) {
    Json row{{"m", m}};
    if (formula) row["formula"] = big_json((*f)[m]);
    if (brute) {
      const u64 v = bruteforce_am(o.A, static_cast<i64>(o.B), m);
      row["brute"] = v;
      if (formula && (*f)[m] != v) match = false;
    }
    rep.results.push_back(std::move(row));
  }
  if (formula && brute) rep.status = match ? "MATCH" : "MISMATCH";
  return rep;
}

inline Report cmd_classes(const Options& o) {
  if (o.index == 0) throw UsageError("--index must be positive");
  require_coprime(o.A, static_cast<i64>(o.B));
  std::map<Fraction, std::vector<SublatticeHNF>> groups;
  for (const auto& k : enumerate_sublattices(o.index)) {
    groups[class_invariant(o.A, static_cast<i64>(o.B), k)].push_back(k);
  }
  Report rep;
  rep.command = "classes";
  rep.params = {{"A", o.A}, {"B", o.B}, {"index", o.index}};
  std::size_t id = 0;
  for (const auto& [inv, members] : groups) {
    ++id;
    for (const auto& k : members) {
      rep.results.push_back({{"class", id},
                             {"invariant", inv.str()},
                             {"a", k.a},
                             {"b", k.b},
                             {"d", k.d}});
    }
  }
  return rep;
}

inline Json ratio_row(const RatioReport& r) {
  Json row{{"B", r.B},
           {"residue", real_json(r.residue)},
           {"r", real_json(r.r)},
           {"two_r_minus_one", real_json(r.two_r_minus_one)},
           {"prime_limit", r.prime_limit},
           {"error_bound", real_json(r.error_bound)}};
  if (auto ex = exact_residue_at_2(r.B)) {
    std::ostringstream os;
    os << *ex;
    row["exact_residue"] = os.str();
  } else {
    row["exact_residue"] = nullptr;
  }
  return row;
}

inline void require_prime_limit(u64 P) {
  if (P < 2) throw UsageError("--prime-limit must be at least 2");
}

inline Report cmd_ratio(const Options& o, Context& ctx) {
  if (o.B == 0) throw UsageError("--B must be positive");
  require_prime_limit(o.prime_limit);
  const RatioReport r = ratio_r(o.B, o.prime_limit, ctx.classes(o.prime_limit));
  Report rep;
  rep.command = "ratio";
  rep.params = {{"B", o.B}, {"prime_limit", o.prime_limit}};
  rep.results.push_back(ratio_row(r));
  rep.error_bound = r.error_bound;
  return rep;
}

inline Report cmd_table1(const Options& o, Context& ctx) {
  require_prime_limit(o.prime_limit);
  const auto rows = table1(o.prime_limit, ctx.classes(o.prime_limit),
                           std::max(1u, o.threads));
  Report rep;
  rep.command = "table1";
  rep.params = {{"prime_limit", o.prime_limit}};
  long double worst = 0;
  for (const auto& r : rows) {
    rep.results.push_back(ratio_row(r));
    worst = std::max(worst, r.error_bound);
  }
  rep.error_bound = worst;
  return rep;
}

inline Report cmd_hb(const Options& o, Context& ctx) {
  if (o.b == 0) throw UsageError("--b must be positive");
  require_prime_limit(o.prime_limit);
  if (o.mode != "general" && o.mode != "closed" && o.mode != "both") {
    throw UsageError("--mode must be general, closed or both");
  }
  EulerEvalConfig cfg;
  cfg.s = o.s;
  cfg.prime_limit = o.prime_limit;
  cfg.validate();
  const PrimeClasses pc = ctx.classes(o.prime_limit)(o.b);
  Report rep;
  rep.command = "hb";
  rep.params = {{"b", o.b}, {"s", o.s}, {"prime_limit", o.prime_limit}, {"mode", o.mode}};
  std::vector<std::pair<std::string, long double>> vals;
  if (o.mode != "closed") vals.emplace_back("general", h_eval(pc, cfg, HMode::general));
  if (o.mode != "general") vals.emplace_back("closed", h_eval(pc, cfg, HMode::closed));
  for (const auto& [name, v] : vals) {
    rep.results.push_back({{"b", o.b},
                           {"units", pc.group.size()},
                           {"mode", name},
                           {"value", real_json(v)}});
  }
  if (vals.size() == 2) {
    rep.results.push_back({{"b", o.b},
                           {"units", pc.group.size()},
                           {"mode", "difference"},
                           {"value", real_json(std::fabs(vals[0].second - vals[1].second))}});
  }
  rep.error_bound = static_cast<long double>(pc.group.size() - 1) *
                    euler_tail_bound(cfg.s, o.prime_limit);
  return rep;
}

// --- verify -----------------------------------------------------------------

struct SuiteTally {
  std::string name;
  u64 checks = 0;
  u64 failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

inline SuiteTally verify_oracle(u64 limit) {
  SuiteTally t{"oracle"};
  for (u64 B : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 16, 18, 20, 24}) {
    const DirichletCoeffs f = theorem11_coeffs(B, limit);
    for (i64 A = 1; A <= static_cast<i64>(B); ++A) {
      if (std::gcd(A, static_cast<i64>(B)) != 1) continue;
      for (u64 m = 1; m <= limit; ++m) {
        const u64 brute = bruteforce_am(A, static_cast<i64>(B), m);
        const u64 cosets = coset_union_count(m, A, static_cast<i64>(B));
        t.check(brute == cosets && f[m] == brute,
                "B=" + std::to_string(B) + " A=" + std::to_string(A) +
                    " m=" + std::to_string(m));
      }
    }
  }
  return t;
}

inline SuiteTally verify_valuation(u64 seed, u64 count) {
  SuiteTally t{"valuation"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> pick_B(1, 1000), pick_k(1, 5), pick_d(1, 10000);
  for (u64 i = 0; i < count; ++i) {
    const u64 B = pick_B(rng);
    std::vector<u64> ds;
    const u64 k = pick_k(rng);
    while (ds.size() < k) {
      const u64 d = pick_d(rng);
      if (std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
    }
    std::sort(ds.begin(), ds.end());
    const DivisorTuple dt(ds);
    t.check(M_direct(B, dt) == M_valuation(B, dt), "B=" + std::to_string(B));
  }
  return t;
}

inline SuiteTally verify_identities(u64 limit) {
  SuiteTally t{"identities"};
  for (u64 b = 1; b <= 24; ++b) {
    const SquareUnitGroup g(b);
    const auto cs = count_squares_table(b, limit);
    for (u64 m = 1; m <= limit; ++m) {
      u64 sum = 0;
      for (u64 u : g.elements()) {
        const int x = X_func(b, u, m);
        sum += static_cast<u64>(x);
        t.check(x == x_via_omega(b, u, m),
                "x b=" + std::to_string(b) + " m=" + std::to_string(m));
      }
      t.check(sum == cs[m] && sum == count_squares(b, m),
              "count b=" + std::to_string(b) + " m=" + std::to_string(m));
    }
  }
  return t;
}

inline SuiteTally verify_closedforms(u64 limit, Context& ctx) {
  SuiteTally t{"closedforms"};
  for (u64 B : table1_moduli()) {
    t.check(explicit_zeta_coeffs(B, limit) == theorem11_coeffs(B, limit),
            "B=" + std::to_string(B));
  }
  EulerEvalConfig cfg;
  cfg.prime_limit = 100000;
  const ClassProvider classes = ctx.classes(cfg.prime_limit);
  for (u64 b = 1; b <= 24; ++b) {
    const PrimeClasses pc = classes(b);
    if (pc.group.size() > 3) continue;
    const long double d = std::fabs(h_eval(pc, cfg, HMode::general) -
                                    h_eval(pc, cfg, HMode::closed));
    t.check(d <= 1e-9L, "hb b=" + std::to_string(b));
  }
  return t;
}

inline Report cmd_verify(const Options& o, Context& ctx) {
  static const std::vector<std::string> kSuites{"oracle", "valuation", "identities",
                                                "closedforms"};
  if (o.suite != "all" &&
      std::find(kSuites.begin(), kSuites.end(), o.suite) == kSuites.end()) {
    throw UsageError("--suite must be all, oracle, valuation, identities or closedforms");
  }
  if (o.verify_limit && *o.verify_limit == 0) throw UsageError("--limit must be positive");
  auto lim = [&](u64 dflt) { return o.verify_limit.value_or(dflt); };
  auto want = [&](const std::string& s) { return o.suite == "all" || o.suite == s; };

  std::vector<SuiteTally> tallies;
  if (want("oracle")) tallies.push_back(verify_oracle(lim(60)));
  if (want("valuation")) tallies.push_back(verify_valuation(o.seed, lim(1000)));
  if (want("identities")) tallies.push_back(verify_identities(lim(1000)));
  if (want("closedforms")) tallies.push_back(verify_closedforms(lim(500), ctx));

  Report rep;
  rep.command = "verify";
  rep.params = {{"suite", o.suite}, {"seed", o.seed}};
  if (o.verify_limit) rep.params["limit"] = *o.verify_limit;
  bool ok = true;
  for (const auto& t : tallies) {
    ok = ok && t.failures == 0;
    rep.results.push_back({{"suite", t.name},
                           {"checks", t.checks},
                           {"failures", t.failures},
                           {"first_failure", t.first_failure},
                           {"status", t.failures ? "FAIL" : "PASS"}});
  }
  rep.status = ok ? "PASS" : "FAIL";
  return rep;
}

// --- entry point --------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Proper isometry class counts for sublattices of the hyperbolic plane"};
  app.name("hzeta");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"human", "json", "csv"}));
  app.add_option("--cache", o.cache_path, "Binary cache of sieves and prime classes");
  app.add_option("--threads", o.threads, "Worker threads for table1")
      ->check(CLI::Range(1u, 256u));

  auto* canon = app.add_subcommand("canonicalize", "Reduce a basis (alpha, beta, gamma) to (n, A, B)");
  canon->add_option("--alpha", o.alpha, "Coefficient of e1 in the first basis vector")->required();
  canon->add_option("--beta", o.beta, "Coefficient of e2 in the first basis vector")->required();
  canon->add_option("--gamma", o.gamma, "Second basis vector is gamma e2")->required();

  auto* coeffs = app.add_subcommand("coeffs", "Dirichlet coefficients a_m^+ for m <= limit");
  coeffs->add_option("--B", o.B, "Invariant B = [H:L] (nL)^-1")->required();
  coeffs->add_option("--A", o.A, "Used by the brute-force method");
  coeffs->add_option("--limit", o.limit, "Largest index m (default 1000)");
  coeffs->add_option("--method", o.method, "formula, brute or both (both exits 2 on mismatch)")
      ->check(CLI::IsMember({"formula", "brute", "both"}));

  auto* classes = app.add_subcommand("classes", "HNF sublattices of one index grouped by proper class");
  classes->add_option("--A", o.A, "Numerator A, coprime to B")->required();
  classes->add_option("--B", o.B, "Invariant B")->required();
  classes->add_option("--index", o.index, "Sublattice index m")->required();

  auto* ratio = app.add_subcommand("ratio", "Residue at s = 2 and the limiting proportion r");
  ratio->add_option("--B", o.B, "Invariant B")->required();
  ratio->add_option("--prime-limit", o.prime_limit, "Euler product cutoff P (default 1e6)");

  auto* t1 = app.add_subcommand("table1", "Proportion table for the standard moduli");
  t1->add_option("--prime-limit", o.prime_limit, "Euler product cutoff P (default 1e6)");

  auto* hb = app.add_subcommand("hb", "Evaluate H_b(s) from truncated Euler products");
  hb->add_option("--b", o.b, "Modulus b")->required();
  hb->add_option("--s", o.s, "Real s > 1 (default 2)");
  hb->add_option("--prime-limit", o.prime_limit, "Euler product cutoff P (default 1e6)");
  hb->add_option("--mode", o.mode, "general, closed or both")->check(CLI::IsMember({"general", "closed", "both"}));

  auto* verify = app.add_subcommand("verify", "Cross-check the independent computation routes");
  verify->add_option("--suite", o.suite, "Which checks to run")
      ->check(CLI::IsMember({"all", "oracle", "valuation", "identities", "closedforms"}));
  verify->add_option("--seed", o.seed, "Seed for the random tuples");
  verify->add_option("--limit", o.verify_limit, "Size bound for the exhaustive ranges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    Context ctx(o);
    Report rep;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "canonicalize") rep = cmd_canonicalize(o);
    else if (name == "coeffs") rep = cmd_coeffs(o, ctx);
    else if (name == "classes") rep = cmd_classes(o);
    else if (name == "ratio") rep = cmd_ratio(o, ctx);
    else if (name == "table1") rep = cmd_table1(o, ctx);
    else if (name == "hb") rep = cmd_hb(o, ctx);
    else rep = cmd_verify(o, ctx);
    emit(rep, o.format, out);
    if (rep.status && (*rep.status == "MISMATCH" || *rep.status == "FAIL")) {
      return kVerifyFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace hzeta::cli
