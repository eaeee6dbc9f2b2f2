#pragma once

// Brute-force machinery behind the coefficient formula: HNF enumeration,
// the rational cosets S_{m,d,A/B}, and the integers M(B; d), C(B; d).

#include <algorithm>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <map>
#include <vector>

#include "hzeta/errors.hpp"
#include "hzeta/lattice.hpp"
#include "hzeta/numtheory.hpp"

namespace hzeta {

/// Strictly increasing tuple d_1 < ... < d_k of positive integers, k >= 1.
class DivisorTuple {
 public:
  explicit DivisorTuple(std::vector<u64> ds) : ds_(std::move(ds)) {
    if (ds_.empty()) throw DomainError("divisor tuple must be nonempty");
    if (ds_.front() < 1) throw DomainError("divisors must be positive");
    for (std::size_t i = 1; i < ds_.size(); ++i) {
      if (ds_[i - 1] >= ds_[i]) {
        throw DomainError("divisor tuple must be strictly increasing");
      }
    }
  }
  DivisorTuple(std::initializer_list<u64> ds)
      : DivisorTuple(std::vector<u64>(ds)) {}

  const std::vector<u64>& values() const { return ds_; }
  std::size_t size() const { return ds_.size(); }
  u64 operator[](std::size_t i) const { return ds_[i]; }

  u64 gcd() const {
    u64 g = 0;
    for (u64 d : ds_) g = std::gcd(g, d);
    return g;
  }

  BigInt lcm() const {
    BigInt l = 1;
    for (u64 d : ds_) l = big_lcm(l, BigInt(d));
    return l;
  }

 private:
  std::vector<u64> ds_;
};

/// Finite subset of Q/Z with canonical, sorted, duplicate-free elements.
class CosetSet {
 public:
  CosetSet() = default;
  explicit CosetSet(std::vector<Fraction> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  const std::vector<Fraction>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const Fraction& f) const {
    return std::binary_search(elems_.begin(), elems_.end(), f);
  }

  CosetSet united(const CosetSet& o) const {
    std::vector<Fraction> out;
    std::set_union(elems_.begin(), elems_.end(), o.elems_.begin(),
                   o.elems_.end(), std::back_inserter(out));
    return CosetSet(std::move(out));
  }

  CosetSet intersected(const CosetSet& o) const {
    std::vector<Fraction> out;
    std::set_intersection(elems_.begin(), elems_.end(), o.elems_.begin(),
                          o.elems_.end(), std::back_inserter(out));
    return CosetSet(std::move(out));
  }

  friend bool operator==(const CosetSet&, const CosetSet&) = default;

 private:
  std::vector<Fraction> elems_;
};

/// (1/d)Z/Z.
inline CosetSet subgroup(u64 d) {
  std::vector<Fraction> out;
  out.reserve(d);
  for (u64 j = 0; j < d; ++j) {
    out.push_back(Fraction::mod_one(static_cast<__int128>(j), d));
  }
  return CosetSet(std::move(out));
}

/// All index-m sublattices in HNF, ordered by (a, b, d). There are sigma_1(m).
inline std::vector<SublatticeHNF> enumerate_sublattices(u64 m) {
  if (m == 0) throw DomainError("index must be positive");
  std::vector<SublatticeHNF> out;
  for (u64 a : divisors(m)) {
    const i64 d = static_cast<i64>(m / a);
    for (i64 b = 0; b < d; ++b) out.emplace_back(static_cast<i64>(a), b, d);
  }
  return out;
}

/// a_m^+: number of distinct proper-class invariants among index-m HNFs.
inline u64 bruteforce_am(i64 A, i64 B, u64 m) {
  require_coprime(A, B);
  std::vector<Fraction> invs;
  for (const auto& k : enumerate_sublattices(m)) {
    invs.push_back(class_invariant(A, B, k));
  }
  std::sort(invs.begin(), invs.end());
  return static_cast<u64>(std::unique(invs.begin(), invs.end()) -
                          invs.begin());
}

/// S_{m,d,A/B} = (A/B)(m/d)/d + (1/d)Z, as d elements of Q/Z.
inline CosetSet coset_S(u64 m, u64 d, i64 A, i64 B) {
  require_coprime(A, B);
  if (d == 0 || m % d != 0) throw DomainError("d must divide m");
  const __int128 shift = static_cast<__int128>(A) * static_cast<i64>(m / d);
  const __int128 den = static_cast<__int128>(B) * static_cast<i64>(d);
  std::vector<Fraction> out;
  out.reserve(d);
  for (u64 j = 0; j < d; ++j) {
    out.push_back(Fraction::mod_one(shift + static_cast<__int128>(j) * B, den));
  }
  return CosetSet(std::move(out));
}

inline u64 coset_union_count(u64 m, i64 A, i64 B) {
  require_coprime(A, B);
  if (m == 0) throw DomainError("m must be positive");
  std::vector<Fraction> all;
  for (u64 d : divisors(m)) {
    const auto s = coset_S(m, d, A, B);
    all.insert(all.end(), s.elements().begin(), s.elements().end());
  }
  return CosetSet(std::move(all)).size();
}

inline u64 coset_intersection_card(u64 m, const DivisorTuple& dt, i64 A,
                                   i64 B) {
  for (u64 d : dt.values()) {
    if (m % d != 0) throw DomainError("every d_i must divide m");
  }
  CosetSet acc = coset_S(m, dt[0], A, B);
  for (std::size_t i = 1; i < dt.size() && !acc.empty(); ++i) {
    acc = acc.intersected(coset_S(m, dt[i], A, B));
  }
  return acc.size();
}

/// Generator of (cap_i d_i Z) cap (cap_{i<j} B gcd(d) (d_i/d_j - d_j/d_i)^{-1} Z),
/// taken as the lcm over Q of the generators in lowest terms.
inline BigInt M_direct(u64 B, const DivisorTuple& dt) {
  if (B == 0) throw DomainError("B must be positive");
  const BigInt g = dt.gcd();
  BigInt num_lcm = 1;
  BigInt den_gcd = 0;
  auto absorb = [&](const BigRational& q) {
    num_lcm = big_lcm(num_lcm, abs(numerator(q)));
    den_gcd = boost::multiprecision::gcd(den_gcd, denominator(q));
  };
  for (u64 d : dt.values()) absorb(BigRational(d));
  for (std::size_t i = 0; i < dt.size(); ++i) {
    for (std::size_t j = i + 1; j < dt.size(); ++j) {
      const BigInt di = dt[i];
      const BigInt dj = dt[j];
      // B g / (di/dj - dj/di) = B g di dj / (di^2 - dj^2)
      const BigInt top = BigInt(B) * g * di * dj;
      // di < dj, so the difference is negative; only the generator's
      // absolute value matters
      const BigInt bottom = dj * dj - di * di;
      absorb(BigRational(top, bottom));
    }
  }
  if (num_lcm % den_gcd != 0) {
    throw InvariantViolation("M(B; d) is not an integer");
  }
  return num_lcm / den_gcd;
}

/// M(B; d) assembled prime by prime from the valuation rule.
inline BigInt M_valuation(u64 B, const DivisorTuple& dt) {
  if (B == 0) throw DomainError("B must be positive");
  std::vector<u64> primes = prime_divisors(B);
  for (u64 d : dt.values()) {
    for (u64 p : prime_divisors(d)) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  const BigInt g = dt.gcd();
  BigInt m = 1;
  for (u64 p : primes) {
    const int vb = valuation(B, p);
    int vmax = 0;
    int vmin = std::numeric_limits<int>::max();
    for (u64 d : dt.values()) {
      const int v = valuation(d, p);
      vmax = std::max(vmax, v);
      vmin = std::min(vmin, v);
    }
    int e = vmax + vb;
    if (vmin == vmax) {
      int pair_min = std::numeric_limits<int>::max();
      for (std::size_t i = 0; i < dt.size(); ++i) {
        for (std::size_t j = i + 1; j < dt.size(); ++j) {
          const BigInt ri = BigInt(dt[i]) / g;
          const BigInt rj = BigInt(dt[j]) / g;
          pair_min = std::min(pair_min, valuation(ri * ri - rj * rj, p));
        }
      }
      e -= std::min(vb, pair_min);
    }
    m *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
  }
  return m;
}

/// C(B; d) = B lcm(d) / M(B; d); always a divisor of B.
inline BigInt C_of(u64 B, const DivisorTuple& dt) {
  const BigInt m = M_direct(B, dt);
  const BigInt top = BigInt(B) * dt.lcm();
  if (top % m != 0) throw InvariantViolation("M(B; d) does not divide B lcm(d)");
  return top / m;
}

/// D_b(m, delta, t) = { d | m : delta | d, (d/delta)^2 = t mod b }.
inline std::vector<u64> D_set(u64 b, u64 m, u64 delta, u64 t) {
  if (b == 0 || m == 0 || delta == 0) {
    throw DomainError("b, m, delta must be positive");
  }
  if (gcd_inf(m, b) % delta != 0) {
    throw DomainError("delta must divide gcd(m, b^inf)");
  }
  if (!is_square_unit(b, t)) throw DomainError("t is not a square unit mod b");
  t %= b;
  std::vector<u64> out;
  for (u64 d : divisors(m)) {
    if (d % delta == 0 && mul_mod(d / delta, d / delta, b) == t) {
      out.push_back(d);
    }
  }
  return out;
}

struct DivisibilityFlags {
  bool b_divides_C = false;
  bool common_square_class = false;
  bool common_D_set = false;

  bool all_equal() const {
    return b_divides_C == common_square_class &&
           common_square_class == common_D_set;
  }
};

/// The three equivalent conditions for b | C(B; d), each evaluated on its
/// own route.
inline DivisibilityFlags prop43_flags(u64 B, u64 b, u64 m, const DivisorTuple& dt) {
  if (B == 0 || b == 0 || B % b != 0) throw DomainError("b must divide B");
  for (u64 d : dt.values()) {
    if (m % d != 0) throw DomainError("every d_i must divide m");
  }
  DivisibilityFlags f;
  f.b_divides_C = C_of(B, dt) % b == 0;

  const u64 g = dt.gcd();
  {
    bool ok = true;
    u64 t = 0;
    for (std::size_t i = 0; i < dt.size() && ok; ++i) {
      const u64 r = dt[i] / g;
      const u64 sq = mul_mod(r, r, b);
      if (std::gcd(r, b) != 1) ok = false;
      if (i == 0) t = sq;
      if (sq != t) ok = false;
    }
    f.common_square_class = ok;
  }

  const std::vector<u64> units = [&] {
    std::vector<u64> us;
    for (u64 t = 0; t < b; ++t) {
      if (is_square_unit(b, t)) us.push_back(t);
    }
    return us;
  }();
  const u64 mb = gcd_inf(m, b);
  for (u64 delta : divisors(mb)) {
    for (u64 t : units) {
      const auto ds = D_set(b, m, delta, t);
      const bool all_in = std::all_of(
          dt.values().begin(), dt.values().end(),
          [&](u64 d) { return std::binary_search(ds.begin(), ds.end(), d); });
      if (all_in) f.common_D_set = true;
    }
  }
  return f;
}

/// Checks #(U_{d in D} (1/d)Z/Z) = delta * #(U_{d | m_co, d^2 = t} (1/d)Z/Z)
/// by explicit set unions on both sides.
inline bool prop44_check(u64 b, u64 m, u64 delta, u64 t) {
  const auto ds = D_set(b, m, delta, t);
  CosetSet lhs;
  for (u64 d : ds) lhs = lhs.united(subgroup(d));

  const u64 m_co = m / gcd_inf(m, b);
  CosetSet rhs;
  for (u64 d : divisors(m_co)) {
    if (mul_mod(d, d, b) == t % b) rhs = rhs.united(subgroup(d));
  }
  return lhs.size() == delta * rhs.size();
}

}  // namespace hzeta
