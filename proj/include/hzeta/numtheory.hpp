#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hzeta/errors.hpp"

namespace hzeta {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// p-adic valuation of a nonzero integer.
inline int valuation(u64 n, u64 p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int valuation(BigInt n, u64 p) {
  if (n == 0) throw DomainError("valuation of zero is infinite");
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// Prime factorization by trial division, ascending primes.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> ps;
  for (const auto& [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

/// All positive divisors of n in ascending order.
inline std::vector<u64> divisors(u64 n) {
  if (n == 0) throw DomainError("divisors of zero");
  std::vector<u64> ds{1};
  for (const auto& [p, e] : factorize(n)) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

inline u64 sigma1(u64 n) {
  u64 s = 0;
  for (u64 d : divisors(n)) s += d;
  return s;
}

/// gcd(x, y^inf): the largest divisor of x built from primes dividing y.
inline u64 gcd_inf(u64 x, u64 y) {
  if (x == 0 || y == 0) throw DomainError("gcd_inf needs positive arguments");
  u64 out = 1;
  for (u64 p : prime_divisors(y)) {
    while (x % p == 0) {
      x /= p;
      out *= p;
    }
  }
  return out;
}

/// True iff x | y^k for some k.
inline bool divides_power_of(u64 x, u64 y) { return gcd_inf(x, y) == x; }

/// Sieve of Eratosthenes; primes <= limit in ascending order.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

/// a^2 mod b is a square of a unit iff t is hit by some a coprime to b.
/// Residues are taken in [0, b); for b = 1 the single residue is 0.
inline bool is_square_unit(u64 b, u64 t) {
  if (b == 0) throw DomainError("modulus must be positive");
  t %= b;
  for (u64 a = 0; a < b; ++a) {
    if (std::gcd(a, b) == 1 && mul_mod(a, a, b) == t) return true;
  }
  return false;
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / boost::multiprecision::gcd(a, b) * b);
}

inline i64 to_i64(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<i64>::max() ||
      v < std::numeric_limits<i64>::min()) {
    throw DomainError(std::string(what) + " does not fit in 64 bits");
  }
  return static_cast<i64>(v);
}

}  // namespace hzeta
