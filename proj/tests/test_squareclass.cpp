#include <gtest/gtest.h>

#include <cmath>

#include "hzeta/hzeta.hpp"
#include "oracles.hpp"

using namespace hzeta;

namespace {

std::vector<u64> v(std::initializer_list<u64> xs) { return xs; }

}  // namespace

TEST(SquareUnits, Examples) {
  EXPECT_EQ(square_units(24).elements(), v({1}));
  EXPECT_EQ(square_units(5).elements(), v({1, 4}));
  EXPECT_EQ(square_units(7).elements(), v({1, 2, 4}));
  EXPECT_EQ(square_units(1).size(), 1u);
  EXPECT_THROW(square_units(0), DomainError);
}

TEST(SquareUnits, GroupStructure) {
  for (u64 b = 1; b <= 60; ++b) {
    const auto g = square_units(b);
    std::set<u64> ref;
    for (u64 a = 0; a < b; ++a) {
      if (std::gcd(a, b) == 1) ref.insert(a * a % b);
    }
    ASSERT_EQ(std::set<u64>(g.elements().begin(), g.elements().end()), ref);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ASSERT_EQ(g.mul_index(i, g.identity_index()), i);
      for (std::size_t j = 0; j < g.size(); ++j) ASSERT_EQ(g.mul_index(i, j), g.mul_index(j, i));
    }
  }
  EXPECT_THROW(square_units(5).require_index(2), DomainError);
}

TEST(ClassifyPrimes, Examples) {
  const auto c5 = classify_primes(5, 10);
  EXPECT_EQ(c5.p0, v({5}));
  EXPECT_EQ(c5.class_of(4), v({2, 3, 7}));
  EXPECT_TRUE(c5.class_of(1).empty());

  const auto c1 = classify_primes(1, 10);
  EXPECT_TRUE(c1.p0.empty());
  EXPECT_EQ(c1.class_of(1), v({2, 3, 5, 7}));

  const auto c7 = classify_primes(7, 20);
  EXPECT_EQ(c7.p0, v({7}));
  EXPECT_EQ(c7.class_of(1), v({13}));
  EXPECT_EQ(c7.class_of(2), v({3, 11, 17}));
  EXPECT_EQ(c7.class_of(4), v({2, 5, 19}));
}

TEST(ClassifyPrimes, Partition) {
  for (u64 b = 1; b <= 30; ++b) {
    const auto pc = classify_primes(b, 3000);
    std::vector<u64> all(pc.p0.begin(), pc.p0.end());
    for (const auto& cls : pc.by_class) {
      ASSERT_TRUE(std::is_sorted(cls.begin(), cls.end()));
      all.insert(all.end(), cls.begin(), cls.end());
    }
    std::sort(all.begin(), all.end());
    ASSERT_TRUE(std::adjacent_find(all.begin(), all.end()) == all.end());
    std::vector<u64> primes;
    for (u64 p = 2; p <= 3000; ++p) {
      if (oracle::is_prime(p)) primes.push_back(p);
    }
    ASSERT_EQ(all, primes) << b;
    ASSERT_EQ(pc.p0.size(), factorize(b).size());
  }
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega(5, 12), WeightVector({0, 3}));
  EXPECT_EQ(omega(5, 1), WeightVector({0, 0}));
  EXPECT_EQ(omega(5, 11), WeightVector({1, 0}));
  EXPECT_EQ(omega(5, 25), WeightVector({0, 0}));
}

TEST(CWeight, Examples) {
  const auto g5 = square_units(5);
  for (u64 w1 : {0, 1, 7}) EXPECT_EQ(c_weight(g5, {w1, 0}), 1u);
  const auto g7 = square_units(7);
  for (u64 w1 : {0, 3}) {
    EXPECT_EQ(c_weight(g7, {w1, 0, 0}), 2u);
    EXPECT_EQ(c_weight(g7, {w1, 1, 0}), 1u);
    EXPECT_EQ(c_weight(g7, {w1, 0, 1}), 1u);
  }
  const auto g24 = square_units(24);
  EXPECT_EQ(c_weight(g24, {5}), 0u);
  EXPECT_THROW(c_weight(g7, {1, 1}), UsageError);
}

namespace {

// Calls f on every weight vector with entries in [0, hi].
template <typename F>
void each_weight(std::size_t n, u64 hi, F&& f) {
  WeightVector w(std::vector<u64>(n, 0));
  while (true) {
    f(w);
    std::size_t i = 0;
    while (i < n && w[i] == hi) w[i++] = 0;
    if (i == n) return;
    ++w[i];
  }
}

// Reachable set straight from the definition: products prod u^{x_u} with
// 0 <= x_u <= w_u (uncapped).
u64 c_definition(const SquareUnitGroup& g, const WeightVector& w) {
  std::set<u64> reach{1 % g.modulus()};
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::set<u64> next;
    for (u64 r : reach) {
      u64 x = r;
      for (u64 k = 0; k <= w[i]; ++k) {
        next.insert(x);
        x = g.mul(x, g.element(i));
      }
    }
    reach = std::move(next);
  }
  return g.size() - reach.size();
}

}  // namespace

TEST(CWeight, SaturationAndAntitone) {
  for (u64 b : {5, 7, 9, 11, 13, 15, 16, 21}) {
    const auto g = square_units(b);
    const std::size_t n = g.size();
    if (n > 6) continue;
    const u64 hi = n <= 3 ? 2 * n : n + 1;
    each_weight(n, hi, [&](const WeightVector& w) {
      const u64 c = c_weight(g, w);
      ASSERT_EQ(c, c_definition(g, w));
      WeightVector capped = w;
      for (auto& x : capped.w) x = std::min<u64>(x, n);
      ASSERT_EQ(c_weight(g, capped), c);
      for (std::size_t i = 0; i < n; ++i) {
        WeightVector up = w;
        ++up[i];
        ASSERT_LE(c_weight(g, up), c);
      }
    });
  }
}

TEST(MembershipT, Examples) {
  const auto g5 = square_units(5);
  EXPECT_TRUE(membership_T(g5, 4, {0, 1}));
  EXPECT_FALSE(membership_T(g5, 4, {3, 0}));
  for (u64 b : {1, 5, 7, 24}) {
    const auto g = square_units(b);
    EXPECT_TRUE(membership_T(g, 1, WeightVector(std::vector<u64>(g.size(), 0))));
  }
  EXPECT_THROW(membership_T(g5, 2, {0, 0}), DomainError);
}

TEST(XViaOmega, Examples) {
  EXPECT_EQ(x_via_omega(5, 4, 6), 1);
  EXPECT_EQ(x_via_omega(5, 4, 11), 0);
  EXPECT_EQ(x_via_omega(5, 1, 1), 1);
}

TEST(XViaOmega, MatchesXFunc) {
  for (u64 b : {3, 5, 7, 8, 9, 13, 16, 24}) {
    const auto g = square_units(b);
    for (u64 m = 1; m <= 2000; ++m) {
      for (u64 t : g.elements()) ASSERT_EQ(x_via_omega(b, t, m), X_func(b, t, m)) << b << " " << m;
    }
  }
}

TEST(SymPrefix, Examples) {
  const auto h = sym_prefix({0.5L}, 3);
  EXPECT_EQ(h, (std::vector<long double>{1, 0.5L, 0.25L, 0.125L}));
  const auto h2 = sym_prefix({0.25L, 1.0L / 9}, 2);
  EXPECT_NEAR(static_cast<double>(h2[2]), 1.0 / 16 + 1.0 / 36 + 1.0 / 81, 1e-15);
  EXPECT_EQ(sym_prefix({}, 2), (std::vector<long double>{1, 0, 0}));
  EXPECT_THROW(sym_prefix({1.5L}, 2), DomainError);
}

TEST(SymPrefix, MatchesMultisetSum) {
  const std::vector<long double> xs{0.5L, 0.25L, 0.2L, 1.0L / 7, 1.0L / 11};
  const auto h = sym_prefix(xs, 5);
  const auto ref = oracle::sym_bruteforce(xs, 5);
  for (std::size_t k = 0; k <= 5; ++k) EXPECT_NEAR(double(h[k]), double(ref[k]), 1e-15);
}

TEST(YValues, Examples) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 10;
  const auto pc = classify_primes(5, 10);
  const auto y4 = y_values(pc, 4, cfg);
  EXPECT_NEAR(double(y4.y[0]), (1 - 1.0 / 4) * (1 - 1.0 / 9) * (1 - 1.0 / 49), 1e-15);
  const auto y1 = y_values(pc, 1, cfg);  // empty class
  EXPECT_EQ(y1.y[0], 1.0L);
  EXPECT_EQ(y1.y[1], 0.0L);
  EXPECT_EQ(y1.tail, 0.0L);

  cfg.s = 1.0L;
  EXPECT_THROW(y_values(pc, 4, cfg), DomainError);
  cfg.s = 2.0L;
  cfg.cap = 0;
  EXPECT_THROW(y_values(pc, 4, cfg), DomainError);  // cap below |U| - 1
}

TEST(YValues, Normalization) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 20000;
  for (u64 b = 1; b <= 24; ++b) {
    const auto pc = classify_primes(b, cfg.prime_limit);
    for (u64 u : pc.group.elements()) {
      const auto y = y_values(pc, u, cfg);
      long double sum = 0;
      for (long double x : y.y) sum += x;
      EXPECT_NEAR(double(sum + y.tail), 1.0, 1e-18);
      EXPECT_GE(y.tail, -1e-12L);
      EXPECT_LE(y.tail, 1.0L);
    }
  }
}

TEST(HEval, Examples) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 1000000;
  for (long double s : {1.5L, 2.0L, 3.0L}) {
    cfg.s = s;
    EXPECT_EQ(h_eval(24, cfg, HMode::general), 1.0L);
    EXPECT_EQ(h_eval(24, cfg, HMode::closed), 1.0L);
  }
  cfg.s = 2;
  const auto pc5 = classify_primes(5, cfg.prime_limit);
  EXPECT_NEAR(double(h_eval(pc5, cfg, HMode::general)), 1.356655, 1e-6);
  EXPECT_NEAR(double(h_eval(pc5, cfg, HMode::closed)), 1.356655, 1e-6);
  EXPECT_THROW(h_eval(13, cfg, HMode::closed), UnsupportedError);
  EXPECT_EQ(parse_hmode("closed"), HMode::closed);
  EXPECT_THROW(parse_hmode("fast"), UsageError);
}

TEST(HEval, ModesAgree) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 100000;
  const auto primes = primes_up_to(cfg.prime_limit);
  for (u64 b = 1; b <= 24; ++b) {
    const auto pc = classify_primes(b, cfg.prime_limit, primes);
    if (pc.group.size() > 3) continue;
    for (long double s : {2.0L, 2.5L, 4.0L}) {
      cfg.s = s;
      EXPECT_NEAR(double(h_eval(pc, cfg, HMode::general)),
                  double(h_eval(pc, cfg, HMode::closed)), 1e-9)
          << b;
    }
  }
}

TEST(HEval, GeneralMatchesWeightGrid) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 2000;
  for (u64 b : {5, 7, 9, 11, 13, 15, 16, 20, 21}) {
    const auto pc = classify_primes(b, cfg.prime_limit);
    if (pc.group.size() > 6) continue;
    for (std::optional<std::size_t> cap : {std::optional<std::size_t>{},
                                           std::optional<std::size_t>{pc.group.size() + 2}}) {
      cfg.cap = cap;
      EXPECT_NEAR(double(h_eval(pc, cfg, HMode::general)), double(oracle::h_grid(pc, cfg)), 1e-12)
          << b;
    }
  }
}

TEST(HEval, BoundedByUnitCount) {
  EulerEvalConfig cfg;
  cfg.prime_limit = 10000;
  for (u64 b = 1; b <= 40; ++b) {
    const auto pc = classify_primes(b, cfg.prime_limit);
    const long double h = h_eval(pc, cfg, HMode::general);
    EXPECT_GE(h, 1.0L - 1e-12L);
    EXPECT_LE(h, static_cast<long double>(pc.group.size()) + 1e-12L);
  }
}

TEST(ExplicitZeta, Examples) {
  const auto c1 = explicit_zeta_coeffs(1, 10);
  for (u64 m = 1; m <= 10; ++m) EXPECT_EQ(c1[m], m);
  EXPECT_EQ(explicit_zeta_coeffs(5, 10)[1], 1);
  EXPECT_EQ(explicit_zeta_coeffs(10, 10)[2], 3);
  EXPECT_EQ(bruteforce_am(1, 10, 2), 3u);
  EXPECT_THROW(explicit_zeta_coeffs(11, 10), UnsupportedError);
  EXPECT_FALSE(has_explicit_zeta(16));
  EXPECT_TRUE(has_explicit_zeta(18));
}

TEST(ExplicitZeta, MatchesFormula) {
  for (u64 B : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 18, 20, 24}) {
    EXPECT_EQ(explicit_zeta_coeffs(B, 1000), theorem11_coeffs(B, 1000)) << B;
  }
}
