#pragma once

// Squares of units modulo b, the grouping of primes by p^2 mod b, the
// reachable-product combinatorics behind c_b(w), and numerical evaluation of
//
//   H_b(s) = |U_b^2| - sum_{w in W} c_b(w) prod_u Y_{u, w_u}(s).
//
// Summing over the infinite weight lattice W is reduced to a finite sum by
// saturating every coordinate at the degree cap K >= |U_b^2| - 1: the set
// {u^x : 0 <= x <= w} stops growing once w reaches the order of u, so all
// weights >= K behave identically and their Y mass is collected in a tail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/dirichlet.hpp"
#include "hzeta/errors.hpp"
#include "hzeta/numtheory.hpp"

namespace hzeta {

/// U_b^2 = {a^2 mod b : gcd(a, b) = 1} under multiplication mod b.
/// Residues live in [0, b), so for b = 1 the only element is 0 (= 1 mod 1).
class SquareUnitGroup {
 public:
  explicit SquareUnitGroup(u64 b) : b_(b) {
    if (b == 0) throw DomainError("modulus must be positive");
    for (u64 a = 0; a < b; ++a) {
      if (std::gcd(a, b) == 1) elems_.push_back(mul_mod(a, a, b));
    }
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  u64 modulus() const { return b_; }
  const std::vector<u64>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  u64 element(std::size_t i) const { return elems_.at(i); }

  std::optional<std::size_t> index_of(u64 t) const {
    t %= b_;
    const auto it = std::lower_bound(elems_.begin(), elems_.end(), t);
    if (it == elems_.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
  }

  std::size_t require_index(u64 t) const {
    const auto i = index_of(t);
    if (!i) {
      throw DomainError(std::to_string(t) + " is not in U_" +
                        std::to_string(b_) + "^2");
    }
    return *i;
  }

  std::size_t identity_index() const { return *index_of(1 % b_); }

  u64 mul(u64 x, u64 y) const { return mul_mod(x, y, b_); }

  /// Index of elements()[i] * elements()[j].
  std::size_t mul_index(std::size_t i, std::size_t j) const {
    return *index_of(mul(elems_[i], elems_[j]));
  }

 private:
  u64 b_;
  std::vector<u64> elems_;
};

inline SquareUnitGroup square_units(u64 b) { return SquareUnitGroup(b); }

/// Nonnegative weights w_u indexed like the elements of a SquareUnitGroup.
struct WeightVector {
  std::vector<u64> w;

  WeightVector() = default;
  explicit WeightVector(std::vector<u64> v) : w(std::move(v)) {}
  WeightVector(std::initializer_list<u64> v) : w(v) {}

  std::size_t size() const { return w.size(); }
  u64& operator[](std::size_t i) { return w[i]; }
  u64 operator[](std::size_t i) const { return w[i]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Primes <= P grouped by p^2 mod b; primes dividing b form class 0.
struct PrimeClasses {
  u64 b = 1;
  u64 prime_limit = 1;
  SquareUnitGroup group{1};
  std::vector<u64> p0;
  std::vector<std::vector<u64>> by_class;  // indexed like group.elements()

  const std::vector<u64>& class_of(u64 u) const {
    return by_class.at(group.require_index(u));
  }
};

inline PrimeClasses classify_primes(u64 b, u64 prime_limit,
                                    const std::vector<u64>& primes) {
  PrimeClasses pc{b, prime_limit, SquareUnitGroup(b), prime_divisors(b), {}};
  pc.by_class.assign(pc.group.size(), {});
  for (u64 p : primes) {
    if (p > prime_limit) break;
    if (b % p == 0) continue;
    pc.by_class[*pc.group.index_of(mul_mod(p, p, b))].push_back(p);
  }
  return pc;
}

inline PrimeClasses classify_primes(u64 b, u64 prime_limit) {
  if (prime_limit < 2) throw DomainError("prime cutoff must be at least 2");
  return classify_primes(b, prime_limit, primes_up_to(prime_limit));
}

/// Omega(m)_u = sum of nu_p(m) over primes p with p^2 = u mod b.
inline WeightVector omega(const SquareUnitGroup& g, u64 m) {
  if (m == 0) throw DomainError("m must be positive");
  WeightVector w(std::vector<u64>(g.size(), 0));
  for (const auto& [p, e] : factorize(m)) {
    if (g.modulus() % p == 0) continue;
    w[*g.index_of(mul_mod(p, p, g.modulus()))] += static_cast<u64>(e);
  }
  return w;
}

inline WeightVector omega(u64 b, u64 m) { return omega(SquareUnitGroup(b), m); }

/// Membership flags (by group index) of
/// { prod_u u^{x_u} : 0 <= x_u <= min(w_u, |U_b^2|) }.
inline std::vector<char> reachable_products(const SquareUnitGroup& g,
                                            const WeightVector& w) {
  if (w.size() != g.size()) {
    throw UsageError("weight vector has " + std::to_string(w.size()) +
                     " entries, group has " + std::to_string(g.size()));
  }
  const std::size_t n = g.size();
  std::vector<char> reach(n, 0);
  reach[g.identity_index()] = 1;
  for (std::size_t u = 0; u < n; ++u) {
    const u64 cap = std::min<u64>(w[u], n);
    std::vector<char> next = reach;
    std::vector<char> cur = reach;
    for (u64 x = 1; x <= cap; ++x) {
      std::vector<char> shifted(n, 0);
      for (std::size_t r = 0; r < n; ++r) {
        if (cur[r]) shifted[g.mul_index(r, u)] = 1;
      }
      cur = shifted;
      for (std::size_t r = 0; r < n; ++r) next[r] |= cur[r];
    }
    reach = next;
  }
  return reach;
}

/// c_b(w): number of t in U_b^2 with w outside T_t.
inline u64 c_weight(const SquareUnitGroup& g, const WeightVector& w) {
  const auto reach = reachable_products(g, w);
  return g.size() - static_cast<u64>(std::count(reach.begin(), reach.end(), 1));
}

inline bool membership_T(const SquareUnitGroup& g, u64 t, const WeightVector& w) {
  const std::size_t i = g.require_index(t);
  return reachable_products(g, w)[i] != 0;
}

/// X(b, t, m) computed through Omega(m) in T_t.
inline int x_via_omega(u64 b, u64 t, u64 m) {
  const SquareUnitGroup g(b);
  return membership_T(g, t, omega(g, m)) ? 1 : 0;
}

/// h_k = Sym_k(xs) for k = 0..K, complete homogeneous symmetric polynomials.
inline std::vector<long double> sym_prefix(const std::vector<long double>& xs,
                                           std::size_t K) {
  std::vector<long double> h(K + 1, 0.0L);
  h[0] = 1.0L;
  for (long double x : xs) {
    if (!(x >= 0 && x < 1)) throw DomainError("sym_prefix needs xs in [0, 1)");
    for (std::size_t k = 1; k <= K; ++k) h[k] += x * h[k - 1];
  }
  return h;
}

struct EulerEvalConfig {
  long double s = 2.0L;
  u64 prime_limit = 1'000'000;
  std::optional<std::size_t> cap;  // defaults to |U_b^2|

  void validate() const {
    if (!(s > 1)) throw DomainError("s must exceed 1");
    if (prime_limit < 2) throw DomainError("prime cutoff must be at least 2");
  }
};

struct YValues {
  std::vector<long double> y;  // Y_{u,0..K-1}
  long double tail = 0;        // mass of all w >= K
};

inline std::size_t effective_cap(const SquareUnitGroup& g,
                                 const EulerEvalConfig& cfg) {
  const std::size_t K = cfg.cap.value_or(g.size());
  if (K + 1 < g.size()) {
    throw DomainError("degree cap must be at least |U_b^2| - 1");
  }
  return K;
}

/// Y_{u,k}(s) = Sym_k({p^-s}) prod (1 - p^-s) over class primes <= P.
inline YValues y_values(const PrimeClasses& pc, u64 u,
                        const EulerEvalConfig& cfg) {
  cfg.validate();
  const std::size_t K = effective_cap(pc.group, cfg);
  const auto& primes = pc.class_of(u);
  std::vector<long double> xs;
  xs.reserve(primes.size());
  long double prod = 1.0L;
  for (u64 p : primes) {
    const long double x = std::pow(static_cast<long double>(p), -cfg.s);
    xs.push_back(x);
    prod *= 1.0L - x;
  }
  YValues out;
  if (K == 0) {
    out.tail = 1.0L;
    return out;
  }
  const auto h = sym_prefix(xs, K - 1);
  long double acc = 0;
  for (std::size_t k = 0; k < K; ++k) {
    out.y.push_back(h[k] * prod);
    acc += out.y.back();
  }
  out.tail = 1.0L - acc;
  return out;
}

enum class HMode { general, closed };

inline HMode parse_hmode(const std::string& s) {
  if (s == "general") return HMode::general;
  if (s == "closed") return HMode::closed;
  throw UsageError("unknown H_b mode: " + s);
}

/// Upper estimate for sum_{p > P} s p^{-s}, the loss from cutting the Euler
/// products at P (prime number theorem density 1/log p).
inline long double euler_tail_bound(long double s, u64 P) {
  const long double pl = static_cast<long double>(P);
  return s / ((s - 1) * std::pow(pl, s - 1) * std::log(pl));
}

/// H_b at the truncation in cfg. Error against the untruncated value is at
/// most (|U_b^2| - 1) * euler_tail_bound(s, P).
inline long double h_eval(const PrimeClasses& pc, const EulerEvalConfig& cfg,
                          HMode mode) {
  cfg.validate();
  const SquareUnitGroup& g = pc.group;
  const std::size_t n = g.size();
  const std::size_t id = g.identity_index();

  if (mode == HMode::closed) {
    if (n > 3) {
      throw UnsupportedError("closed form needs |U_b^2| <= 3, got " +
                             std::to_string(n));
    }
    if (n == 1) return 1.0L;
    // primes coprime to b with p^2 != 1 mod b, ascending
    std::vector<u64> ps;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != id) ps.insert(ps.end(), pc.by_class[i].begin(), pc.by_class[i].end());
    }
    std::sort(ps.begin(), ps.end());
    long double prod = 1.0L;
    long double sum = 0.0L;
    for (u64 p : ps) {
      const long double x = std::pow(static_cast<long double>(p), -cfg.s);
      prod *= 1.0L - x;
      sum += x;
    }
    if (n == 2) return 2.0L - prod;
    return 3.0L - 2.0L * prod - sum * prod;
  }

  if (n > 64) {
    throw UnsupportedError("general mode supports |U_b^2| <= 64");
  }
  const std::size_t K = effective_cap(g, cfg);

  // The identity class never changes the reachable set, and its Y values sum
  // to one, so it is summed out. The remaining classes are folded in one at a
  // time, merging weight prefixes that reach the same product set; this is
  // the same finite sum as enumerating {0..K}^{n-1} with c_b(w).
  std::vector<u64> power_masks(n, 0);  // bitmask of {u^0..u^k} for k = 0..
  std::map<u64, long double> mass{{u64{1} << id, 1.0L}};
  for (std::size_t u = 0; u < n; ++u) {
    if (u == id) continue;
    const YValues yv = y_values(pc, g.element(u), cfg);
    std::map<u64, long double> next;
    for (const auto& [reach, m] : mass) {
      u64 cur = reach;
      for (std::size_t w = 0; w <= K; ++w) {
        if (w > 0) {
          u64 shifted = 0;
          for (std::size_t r = 0; r < n; ++r) {
            if (cur >> r & 1) shifted |= u64{1} << g.mul_index(r, u);
          }
          cur |= shifted;
        }
        const long double yw = w < K ? yv.y[w] : yv.tail;
        next[cur] += m * yw;
      }
    }
    mass = std::move(next);
  }
  long double expected_c = 0;
  for (const auto& [reach, m] : mass) {
    expected_c += m * static_cast<long double>(n - std::popcount(reach));
  }
  return static_cast<long double>(n) - expected_c;
}

inline long double h_eval(u64 b, const EulerEvalConfig& cfg, HMode mode) {
  cfg.validate();
  return h_eval(classify_primes(b, cfg.prime_limit), cfg, mode);
}

namespace detail {

using DPoly = std::map<u64, i64>;  // finite Dirichlet polynomial n -> c_n

inline DPoly poly_mul(const DPoly& a, const DPoly& b) {
  DPoly out;
  for (const auto& [i, x] : a) {
    for (const auto& [j, y] : b) out[i * j] += x * y;
  }
  return out;
}

struct ClosedFamily {
  u64 modulus = 1;                 // class primes: p^2 mod modulus in squares
  std::vector<u64> squares;
  DPoly P;                         // zeta_L = zeta(s-1) (P - (Q + R S) Pi)
  DPoly Q;
  DPoly R;
};

inline std::optional<ClosedFamily> closed_family(u64 B) {
  const DPoly one{{1, 1}};
  switch (B) {
    case 1: case 2: case 3: case 4: case 6: case 8: case 12: case 24: {
      DPoly p;
      for (u64 b : divisors(B)) p[b] = 1;
      return ClosedFamily{1, {}, p, {}, {}};
    }
    case 5:
      return ClosedFamily{5, {4}, {{1, 2}, {5, 1}}, one, {}};
    case 10:
      return ClosedFamily{10, {9}, poly_mul({{1, 1}, {2, 1}}, {{1, 2}, {5, 1}}),
                          {{1, 1}, {2, 1}, {4, -1}}, {}};
    case 15:
      return ClosedFamily{15, {4}, poly_mul({{1, 1}, {3, 1}}, {{1, 2}, {5, 1}}),
                          {{1, 1}, {3, 1}, {9, -1}}, {}};
    case 20:
      return ClosedFamily{10, {9},
                          poly_mul({{1, 1}, {2, 1}, {4, 1}}, {{1, 2}, {5, 1}}),
                          {{1, 1}, {2, 1}, {4, 1}, {8, -1}}, {}};
    case 7:
      return ClosedFamily{7, {2, 4}, {{1, 3}, {7, 1}}, {{1, 2}}, one};
    case 9:
      return ClosedFamily{9, {4, 7}, {{1, 3}, {3, 1}, {9, 1}}, {{1, 2}}, one};
    case 14:
      return ClosedFamily{14, {9, 11},
                          poly_mul({{1, 1}, {2, 1}}, {{1, 3}, {7, 1}}),
                          {{1, 2}, {2, 2}, {4, -1}, {8, -1}},
                          {{1, 1}, {2, 1}, {4, -1}}};
    case 18:
      return ClosedFamily{18, {7, 13},
                          poly_mul({{1, 1}, {2, 1}}, {{1, 3}, {3, 1}, {9, 1}}),
                          {{1, 2}, {2, 2}, {4, -1}, {8, -1}},
                          {{1, 1}, {2, 1}, {4, -1}}};
    default:
      return std::nullopt;
  }
}

inline DirichletCoeffs from_poly(const DPoly& p, u64 limit) {
  DirichletCoeffs out(limit);
  for (const auto& [n, c] : p) {
    if (n <= limit) out[n] = c;
  }
  return out;
}

}  // namespace detail

/// B values with a closed-form zeta_L in terms of one prime class product.
inline bool has_explicit_zeta(u64 B) {
  return detail::closed_family(B).has_value();
}

/// Exact coefficients of the closed-form expression for zeta_L, built from
/// finite Dirichlet polynomials, the class product prod (1 - p^-s) (expanded
/// over squarefree products of class primes <= N) and the class sum
/// sum p^-s, then multiplied by zeta(s-1).
inline DirichletCoeffs explicit_zeta_coeffs(u64 B, u64 limit) {
  const auto fam = detail::closed_family(B);
  if (!fam) {
    throw UnsupportedError("no closed form for B = " + std::to_string(B));
  }
  std::vector<u64> cls;
  for (u64 p : primes_up_to(limit)) {
    const u64 sq = mul_mod(p, p, fam->modulus);
    if (std::find(fam->squares.begin(), fam->squares.end(), sq) !=
        fam->squares.end()) {
      cls.push_back(p);
    }
  }

  DirichletCoeffs prod(limit);
  std::function<void(std::size_t, u64, int)> dfs = [&](std::size_t i, u64 n,
                                                       int sign) {
    prod[n] += sign;
    for (std::size_t j = i; j < cls.size() && n * cls[j] <= limit; ++j) {
      dfs(j + 1, n * cls[j], -sign);
    }
  };
  dfs(0, 1, 1);

  DirichletCoeffs sum(limit);
  for (u64 p : cls) sum[p] = 1;

  const DirichletCoeffs factor =
      detail::from_poly(fam->Q, limit) +
      dmul(detail::from_poly(fam->R, limit), sum);
  const DirichletCoeffs inner =
      detail::from_poly(fam->P, limit) - dmul(factor, prod);
  return dmul(DirichletCoeffs::zeta_shifted(limit, 1), inner);
}

}  // namespace hzeta
