#pragma once

// Residues at the pole s = 2, the limiting proportion r of proper classes,
// and partial-sum checks of the asymptotics s_X^+ ~ (Res/2) X^2.

#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <vector>

#include "hzeta/dirichlet.hpp"
#include "hzeta/numtheory.hpp"
#include "hzeta/squareclass.hpp"

namespace hzeta {

inline constexpr long double kZeta2 =
    std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6;

inline constexpr u64 kDefaultPrimeLimit = 1'000'000;

/// Rows reported in the proportion table.
inline const std::vector<u64>& table1_moduli() {
  static const std::vector<u64> kB{1, 2, 3, 4, 5, 6, 7, 8,
                                   9, 10, 12, 14, 15, 18, 20, 24};
  return kB;
}

struct RatioReport {
  u64 B = 1;
  long double residue = 0;
  long double r = 0;
  long double two_r_minus_one = 0;
  u64 prime_limit = 0;
  long double error_bound = 0;  // bound on |r - r_true|
};

/// Supplies the prime classification for a modulus b.
using ClassProvider = std::function<PrimeClasses(u64 b)>;

inline ClassProvider default_classes(u64 prime_limit) {
  auto primes = std::make_shared<std::vector<u64>>(primes_up_to(prime_limit));
  return [primes, prime_limit](u64 b) {
    return classify_primes(b, prime_limit, *primes);
  };
}

/// sum_{b | B} (b/B)^2 exactly, when every H_b is identically one.
inline std::optional<BigRational> exact_residue_at_2(u64 B) {
  BigRational acc = 0;
  for (u64 b : divisors(B)) {
    if (SquareUnitGroup(b).size() != 1) return std::nullopt;
    acc += BigRational(b * b, B * B);
  }
  return acc;
}

struct ResidueResult {
  long double value = 0;
  long double error_bound = 0;
};

inline ResidueResult residue_at_2_detail(u64 B, u64 prime_limit,
                                         const ClassProvider& classes) {
  if (B == 0) throw DomainError("B must be positive");
  EulerEvalConfig cfg;
  cfg.s = 2.0L;
  cfg.prime_limit = prime_limit;
  const long double tail = euler_tail_bound(cfg.s, prime_limit);
  ResidueResult out;
  for (u64 b : divisors(B)) {
    const PrimeClasses pc = classes(b);
    const std::size_t n = pc.group.size();
    const HMode mode = n <= 3 ? HMode::closed : HMode::general;
    const long double w = static_cast<long double>(b) * b /
                          (static_cast<long double>(B) * B);
    out.value += w * h_eval(pc, cfg, mode);
    out.error_bound += w * static_cast<long double>(n - 1) * tail;
  }
  return out;
}

/// Res_{s=2} zeta_L(s) = sum_{b | B} (b/B)^2 H_b(2).
inline long double residue_at_2(u64 B, u64 prime_limit = kDefaultPrimeLimit) {
  return residue_at_2_detail(B, prime_limit, default_classes(prime_limit)).value;
}

inline RatioReport ratio_r(u64 B, u64 prime_limit,
                           const ClassProvider& classes) {
  const ResidueResult res = residue_at_2_detail(B, prime_limit, classes);
  RatioReport rep;
  rep.B = B;
  rep.residue = res.value;
  rep.r = res.value / kZeta2;
  rep.two_r_minus_one = 2 * rep.r - 1;
  rep.prime_limit = prime_limit;
  rep.error_bound = res.error_bound / kZeta2;
  return rep;
}

inline RatioReport ratio_r(u64 B, u64 prime_limit = kDefaultPrimeLimit) {
  return ratio_r(B, prime_limit, default_classes(prime_limit));
}

/// One report per table row, ordered by B. Rows are independent and are
/// spread over `threads` workers when threads > 1.
inline std::vector<RatioReport> table1(u64 prime_limit,
                                       const ClassProvider& classes,
                                       unsigned threads = 1) {
  const auto& moduli = table1_moduli();
  std::vector<RatioReport> rows(moduli.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      rows[i] = ratio_r(moduli[i], prime_limit, classes);
    }
    return rows;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < threads; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < moduli.size(); i += threads) {
        rows[i] = ratio_r(moduli[i], prime_limit, classes);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

inline std::vector<RatioReport> table1(u64 prime_limit = kDefaultPrimeLimit,
                                       unsigned threads = 1) {
  return table1(prime_limit, default_classes(prime_limit), threads);
}

struct PartialSums {
  BigInt proper_classes;  // s_X^+ = sum_{m < X} a_m^+
  BigInt all_sublattices; // s_X(Z^2) = sum_{m < X} sigma_1(m)
};

inline PartialSums partial_sums(u64 B, u64 X) {
  if (X < 2) throw DomainError("X must be at least 2");
  const SieveTables sieve(X - 1);
  const DirichletCoeffs a = theorem11_coeffs(B, sieve, X - 1);
  PartialSums out;
  for (u64 m = 1; m < X; ++m) {
    out.proper_classes += a[m];
    out.all_sublattices += sieve.sigma1(m);
  }
  return out;
}

/// P_L^+(X) = s_X^+ / s_X(Z^2).
inline long double partial_ratio(u64 B, u64 X) {
  const PartialSums ps = partial_sums(B, X);
  return static_cast<long double>(ps.proper_classes) /
         static_cast<long double>(ps.all_sublattices);
}

/// s_X^+ / ((Res/2) X^2); tends to one as X grows.
inline long double slope_check(u64 B, u64 X,
                               u64 prime_limit = kDefaultPrimeLimit) {
  if (X < 100) throw DomainError("X must be at least 100");
  const PartialSums ps = partial_sums(B, X);
  const long double res = residue_at_2(B, prime_limit);
  const long double x = static_cast<long double>(X);
  return static_cast<long double>(ps.proper_classes) / (res / 2 * x * x);
}

}  // namespace hzeta
