#pragma once

// Truncated Dirichlet series with exact coefficients, multiplicative sieve
// tables, and the coefficient engine for the proper-class zeta function
//
//   zeta_L(s) = zeta(s-1)/zeta(s) * sum_{b | B} (B/b)^{-s}
//               * sum_m #{d^2 mod b : d | m, gcd(d, b) = 1} m^{-s}.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hzeta/errors.hpp"
#include "hzeta/numtheory.hpp"

namespace hzeta {

/// Linear sieve up to N: smallest prime factor, Moebius, totient, sigma_1.
class SieveTables {
 public:
  explicit SieveTables(u64 limit) : limit_(limit) {
    if (limit == 0) throw DomainError("sieve limit must be positive");
    spf_.assign(limit + 1, 0);
    std::vector<u64> primes;
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes.push_back(i);
      }
      for (u64 p : primes) {
        if (p > spf_[i] || i * p > limit) break;
        spf_[i * p] = static_cast<std::uint32_t>(p);
      }
    }
    fill_from_spf();
  }

  /// Rebuilds the tables from a stored smallest-prime-factor array
  /// (index 0..N).
  static SieveTables from_spf(std::vector<std::uint32_t> spf) {
    if (spf.size() < 2) throw DomainError("spf table too short");
    for (u64 m = 2; m < spf.size(); ++m) {
      const u64 p = spf[m];
      if (p < 2 || m % p != 0 || spf[p] != p) {
        throw InvariantViolation("spf table is corrupt at " + std::to_string(m));
      }
    }
    SieveTables t;
    t.limit_ = spf.size() - 1;
    t.spf_ = std::move(spf);
    t.fill_from_spf();
    return t;
  }

  u64 limit() const { return limit_; }
  const std::vector<u64>& primes() const { return primes_; }
  const std::vector<std::uint32_t>& spf_table() const { return spf_; }

  u64 spf(u64 m) const { return spf_.at(m); }
  int mu(u64 m) const { return mu_.at(m); }
  u64 phi(u64 m) const { return phi_.at(m); }
  u64 sigma1(u64 m) const { return sigma_.at(m); }

  int nu(u64 p, u64 m) const {
    int v = 0;
    while (m > 1 && m % p == 0) {
      m /= p;
      ++v;
    }
    return v;
  }

  std::vector<std::pair<u64, int>> factorize(u64 m) const {
    std::vector<std::pair<u64, int>> out;
    while (m > 1) {
      const u64 p = spf_.at(m);
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

 private:
  SieveTables() = default;

  // m = p^e * rest with p = spf(m); mu, phi, sigma_1 follow multiplicatively.
  void fill_from_spf() {
    const u64 n = limit_;
    mu_.assign(n + 1, 0);
    phi_.assign(n + 1, 0);
    sigma_.assign(n + 1, 0);
    primes_.clear();
    std::vector<u64> pp(n + 1, 1);
    mu_[1] = 1;
    phi_[1] = 1;
    sigma_[1] = 1;
    for (u64 m = 2; m <= n; ++m) {
      const u64 p = spf_[m];
      const u64 q = m / p;
      if (p == m) primes_.push_back(p);
      pp[m] = (q > 1 && spf_[q] == p) ? pp[q] * p : p;
      const u64 rest = m / pp[m];
      mu_[m] = pp[m] == p ? static_cast<std::int8_t>(-mu_[q]) : 0;
      phi_[m] = phi_[rest] * (pp[m] - pp[m] / p);
      sigma_[m] = sigma_[rest] * ((pp[m] * p - 1) / (p - 1));
    }
  }

  u64 limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mu_;
  std::vector<u64> phi_;
  std::vector<u64> sigma_;
  std::vector<u64> primes_;
};

inline SieveTables sieve_tables(u64 limit) { return SieveTables(limit); }

/// Coefficients c_1..c_N of sum c_m m^{-s}. Every operation is exact on
/// indices 1..N; nothing is implied beyond N.
template <typename T>
class DirichletSeries {
 public:
  explicit DirichletSeries(u64 limit) : c_(limit, T(0)) {
    if (limit == 0) throw DomainError("series limit must be positive");
  }

  static DirichletSeries identity(u64 limit) {
    DirichletSeries s(limit);
    s[1] = 1;
    return s;
  }

  static DirichletSeries from(u64 limit, const std::function<T(u64)>& f) {
    DirichletSeries s(limit);
    for (u64 m = 1; m <= limit; ++m) s[m] = f(m);
    return s;
  }

  /// zeta(s - k): coefficients m^k.
  static DirichletSeries zeta_shifted(u64 limit, unsigned k = 0) {
    return from(limit, [k](u64 m) {
      T v = 1;
      for (unsigned i = 0; i < k; ++i) v *= T(m);
      return v;
    });
  }

  u64 limit() const { return c_.size(); }
  T& operator[](u64 m) { return c_[m - 1]; }
  const T& operator[](u64 m) const { return c_[m - 1]; }
  const std::vector<T>& coefficients() const { return c_; }

  DirichletSeries& operator+=(const DirichletSeries& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  DirichletSeries& operator-=(const DirichletSeries& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  DirichletSeries& operator*=(const T& k) {
    for (auto& v : c_) v *= k;
    return *this;
  }
  friend DirichletSeries operator+(DirichletSeries a, const DirichletSeries& b) {
    return a += b;
  }
  friend DirichletSeries operator-(DirichletSeries a, const DirichletSeries& b) {
    return a -= b;
  }

  friend bool operator==(const DirichletSeries&,
                         const DirichletSeries&) = default;

  void check_same(const DirichletSeries& o) const {
    if (o.limit() != limit()) {
      throw UsageError("series limits differ: " + std::to_string(limit()) +
                       " vs " + std::to_string(o.limit()));
    }
  }

 private:
  std::vector<T> c_;
};

using DirichletCoeffs = DirichletSeries<BigInt>;

/// Dirichlet convolution, truncated at the common limit.
template <typename T>
DirichletSeries<T> dmul(const DirichletSeries<T>& x,
                        const DirichletSeries<T>& y) {
  x.check_same(y);
  const u64 n = x.limit();
  DirichletSeries<T> out(n);
  for (u64 d = 1; d <= n; ++d) {
    if (x[d] == 0) continue;
    for (u64 e = 1; d * e <= n; ++e) {
      if (y[e] != 0) out[d * e] += x[d] * y[e];
    }
  }
  return out;
}

/// q with dmul(q, y) = x; needs y_1 = +-1.
template <typename T>
DirichletSeries<T> ddiv(const DirichletSeries<T>& x,
                        const DirichletSeries<T>& y) {
  x.check_same(y);
  if (y[1] != 1 && y[1] != -1) {
    throw DomainError("divisor series needs leading coefficient +-1");
  }
  const u64 n = x.limit();
  DirichletSeries<T> rest = x;
  DirichletSeries<T> q(n);
  for (u64 m = 1; m <= n; ++m) {
    q[m] = rest[m] * y[1];
    if (q[m] == 0) continue;
    for (u64 j = 2; m * j <= n; ++j) {
      if (y[j] != 0) rest[m * j] -= q[m] * y[j];
    }
  }
  return q;
}

/// Multiplication by k^{-s}.
template <typename T>
DirichletSeries<T> shift_scale(const DirichletSeries<T>& x, u64 k) {
  if (k == 0) throw DomainError("scale must be positive");
  DirichletSeries<T> out(x.limit());
  for (u64 j = 1; j * k <= x.limit(); ++j) out[j * k] = x[j];
  return out;
}

/// #{d^2 mod b : d | m, gcd(d, b) = 1}.
inline u64 count_squares(u64 b, u64 m) {
  if (b == 0 || m == 0) throw DomainError("b and m must be positive");
  std::vector<u64> seen;
  for (u64 d : divisors(m)) {
    if (std::gcd(d, b) != 1) continue;
    const u64 r = mul_mod(d, d, b);
    if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
  }
  return seen.size();
}

/// count_squares(b, m) for every m <= N via a divisor-multiple sweep.
inline std::vector<u64> count_squares_table(u64 b, u64 limit) {
  if (b == 0) throw DomainError("b must be positive");
  std::vector<u64> residues;
  for (u64 a = 0; a < b; ++a) {
    if (std::gcd(a, b) == 1) {
      const u64 r = mul_mod(a, a, b);
      if (std::find(residues.begin(), residues.end(), r) == residues.end()) {
        residues.push_back(r);
      }
    }
  }
  std::sort(residues.begin(), residues.end());
  std::vector<u64> out(limit + 1, 0);
  if (residues.size() <= 64) {
    std::vector<u64> masks(limit + 1, 0);
    for (u64 d = 1; d <= limit; ++d) {
      if (std::gcd(d, b) != 1) continue;
      const u64 r = mul_mod(d, d, b);
      const auto idx = std::lower_bound(residues.begin(), residues.end(), r) -
                       residues.begin();
      const u64 bit = u64{1} << idx;
      for (u64 m = d; m <= limit; m += d) masks[m] |= bit;
    }
    for (u64 m = 1; m <= limit; ++m) out[m] = std::popcount(masks[m]);
  } else {
    for (u64 m = 1; m <= limit; ++m) out[m] = count_squares(b, m);
  }
  return out;
}

/// 1 iff some divisor d of m has d^2 = t mod b.
inline int X_func(u64 b, u64 t, u64 m) {
  if (!is_square_unit(b, t)) throw DomainError("t is not a square unit mod b");
  if (m == 0) throw DomainError("m must be positive");
  t %= b;
  for (u64 d : divisors(m)) {
    if (mul_mod(d, d, b) == t) return 1;
  }
  return 0;
}

/// Exact coefficients of zeta_L(s) for the invariant B, up to N.
inline DirichletCoeffs theorem11_coeffs(u64 B, const SieveTables& sieve,
                                        u64 limit) {
  if (B == 0) throw DomainError("B must be positive");
  if (limit == 0) throw DomainError("limit must be positive");
  if (sieve.limit() < limit) throw UsageError("sieve shorter than limit");
  DirichletCoeffs phi(limit);
  for (u64 m = 1; m <= limit; ++m) phi[m] = sieve.phi(m);

  DirichletCoeffs inner(limit);
  for (u64 b : divisors(B)) {
    const auto cs = count_squares_table(b, limit);
    DirichletCoeffs series(limit);
    for (u64 m = 1; m <= limit; ++m) series[m] = cs[m];
    inner += shift_scale(series, B / b);
  }
  return dmul(phi, inner);
}

inline DirichletCoeffs theorem11_coeffs(u64 B, u64 limit) {
  return theorem11_coeffs(B, SieveTables(limit), limit);
}

/// |F(b,s) * sum_{n | b^inf, n <= K} sigma_1(n) n^{-s}
///   - b^s prod_{p | b} (1 - p^{1-s})^{-1}|,
/// F(b,s) = sum_{d | b} d^s mu(b/d). The truncated b-smooth sum misses a
/// tail that shrinks like K^{2-s} up to logarithmic factors.
inline long double prop45_residual(u64 b, long double s, u64 K) {
  if (!(s > 2)) throw DomainError("s must exceed 2");
  if (b == 0) throw DomainError("b must be positive");
  if (K < b) throw DomainError("truncation bound must be at least b");
  const auto fac = factorize(b);

  long double F = 0;
  for (u64 d : divisors(b)) {
    const u64 q = b / d;
    int mu = 1;
    for (const auto& [p, e] : factorize(q)) {
      if (e > 1) mu = 0;
      mu = -mu;
    }
    if (mu != 0) F += mu * std::pow(static_cast<long double>(d), s);
  }

  // Enumerate n = prod p^e over primes of b with n <= K; sigma_1 is
  // multiplicative.
  long double sum = 0;
  std::function<void(std::size_t, u64, long double)> walk =
      [&](std::size_t i, u64 n, long double sig) {
        if (i == fac.size()) {
          sum += sig * std::pow(static_cast<long double>(n), -s);
          return;
        }
        const u64 p = fac[i].first;
        u64 pk = 1;
        long double sp = 1;  // sigma_1(p^k)
        while (true) {
          walk(i + 1, n * pk, sig * sp);
          if (pk > K / p || n * pk > K / p) break;
          pk *= p;
          sp += static_cast<long double>(pk);
        }
      };
  walk(0, 1, 1);

  long double rhs = std::pow(static_cast<long double>(b), s);
  for (const auto& [p, e] : fac) {
    rhs /= 1 - std::pow(static_cast<long double>(p), 1 - s);
  }
  return std::fabs(F * sum - rhs);
}

}  // namespace hzeta
