#pragma once

// Sublattices of the hyperbolic plane lattice H = Ze1 + Ze2 with
// Q(e1) = Q(e2) = 0 and B(e1, e2) = 1/2: canonical Gram forms and the
// proper isometry criterion for sublattices in Hermite normal form.

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "hzeta/errors.hpp"
#include "hzeta/numtheory.hpp"

namespace hzeta {

/// The lattice Z(alpha e1 + beta e2) + Z(gamma e2).
struct BasisTriple {
  BigInt alpha;
  BigInt beta;
  BigInt gamma;
};

/// A sublattice of H up to basis change, with Gram matrix
/// [[nA, nB/2], [nB/2, 0]], 1 <= A <= B, gcd(A, B) = 1.
struct CanonicalLattice {
  BigInt n;
  BigInt A;
  BigInt B;

  friend bool operator==(const CanonicalLattice&,
                         const CanonicalLattice&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const CanonicalLattice& l) {
  return os << "(n=" << l.n << ", A=" << l.A << ", B=" << l.B << ")";
}

/// Z(a e1 + b e2) + Z(d e2) with 0 <= b < d; index a*d.
struct SublatticeHNF {
  i64 a = 1;
  i64 b = 0;
  i64 d = 1;

  SublatticeHNF() = default;
  SublatticeHNF(i64 a_, i64 b_, i64 d_) : a(a_), b(b_), d(d_) {
    if (a < 1 || d < 1 || b < 0 || b >= d) {
      throw DomainError("HNF triple needs a >= 1, d >= 1, 0 <= b < d");
    }
  }

  i64 index() const { return a * d; }

  friend auto operator<=>(const SublatticeHNF&,
                          const SublatticeHNF&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const SublatticeHNF& k) {
  return os << "(" << k.a << "," << k.b << "," << k.d << ")";
}

namespace detail {

inline __int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// Canonical representative of an element of Q/Z: 0 <= num < den,
/// gcd(num, den) = 1.
class Fraction {
 public:
  Fraction() = default;

  /// num/den + Z for any integers with den != 0.
  static Fraction mod_one(__int128 num, __int128 den) {
    if (den == 0) throw DomainError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    num %= den;
    if (num < 0) num += den;
    const __int128 g = detail::gcd128(num, den);
    num /= g;
    den /= g;
    constexpr __int128 kMax = std::numeric_limits<i64>::max();
    if (den > kMax) throw DomainError("fraction denominator overflows 64 bits");
    return Fraction(static_cast<i64>(num), static_cast<i64>(den));
  }

  i64 num() const { return num_; }
  i64 den() const { return den_; }

  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend auto operator<=>(const Fraction&, const Fraction&) = default;

 private:
  Fraction(i64 num, i64 den) : num_(num), den_(den) {}

  i64 num_ = 0;
  i64 den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Fraction& f) {
  return os << f.str();
}

/// The basis Z(alpha e1 + (beta - gamma k) e2) + Z(gamma e2) of the same
/// lattice, with alpha, gamma > 0 and (beta - gamma k)/gcd(beta, gamma) in
/// [1, gamma/gcd(beta, gamma)].
inline BasisTriple canonical_basis(BasisTriple t) {
  if (t.alpha == 0 || t.gamma == 0) {
    throw DomainError("rank deficient: alpha and gamma must be nonzero");
  }
  if (t.alpha < 0) {
    t.alpha = -t.alpha;
    t.beta = -t.beta;
  }
  if (t.gamma < 0) t.gamma = -t.gamma;

  // gcd(0, gamma) = gamma
  const BigInt g = boost::multiprecision::gcd(t.beta, t.gamma);
  const BigInt big_b = t.gamma / g;
  BigInt a = (t.beta / g) % big_b;
  if (a <= 0) a += big_b;
  return BasisTriple{t.alpha, a * g, t.gamma};
}

/// Reduces a basis to the (n, A, B) normal form. Negative alpha or gamma
/// are absorbed by negating basis vectors first.
inline CanonicalLattice canonicalize(const BasisTriple& t) {
  const BasisTriple c = canonical_basis(t);
  const BigInt g = boost::multiprecision::gcd(c.beta, c.gamma);
  return CanonicalLattice{c.alpha * g, c.beta / g, c.gamma / g};
}

/// A basis realizing the canonical Gram matrix: Q(n e1 + A e2) = nA and
/// B(n e1 + A e2, B e2) = nB/2.
inline BasisTriple to_basis(const CanonicalLattice& l) {
  return BasisTriple{l.n, l.A, l.B};
}

inline void validate(const CanonicalLattice& l) {
  if (l.n < 1 || l.A < 1 || l.A > l.B ||
      boost::multiprecision::gcd(l.A, l.B) != 1) {
    throw DomainError("not a canonical lattice: need n >= 1, 1 <= A <= B, "
                      "gcd(A, B) = 1");
  }
}

/// Row-major Gram matrix (g11, g12, g21, g22).
inline std::array<BigRational, 4> gram(const CanonicalLattice& l) {
  validate(l);
  const BigRational off(l.n * l.B, 2);
  return {BigRational(l.n * l.A), off, off, BigRational(0)};
}

/// The generator of [H:L] (nL)^{-1}. Recomputes the index from the
/// discriminant ratio d_L / d_H and the norm ideal from Q on a basis, then
/// checks the quotient against the stored B.
inline BigInt invariant_B(const CanonicalLattice& l) {
  const auto g = gram(l);
  const BigRational disc = g[0] * g[3] - g[1] * g[2];
  const BigRational disc_h(-1, 4);
  const BigRational index_sq = disc / disc_h;
  if (denominator(index_sq) != 1) {
    throw InvariantViolation("discriminant ratio is not an integer");
  }
  const BigInt idx2 = numerator(index_sq);
  const BigInt index = boost::multiprecision::sqrt(idx2);
  if (index * index != idx2) {
    throw InvariantViolation("discriminant ratio is not a square");
  }
  // nL is generated by Q(v1) = g11 and 2B(v1, v2) = Q(v1 + v2) - Q(v1) - Q(v2).
  const BigRational cross = 2 * g[1];
  if (denominator(g[0]) != 1 || denominator(cross) != 1) {
    throw InvariantViolation("norm values are not integral");
  }
  const BigInt norm =
      boost::multiprecision::gcd(numerator(g[0]), numerator(cross));
  if (index % norm != 0 || index / norm != l.B) {
    throw InvariantViolation("[H:L]/nL disagrees with stored B");
  }
  return index / norm;
}

inline void require_coprime(i64 A, i64 B) {
  if (B < 1) throw DomainError("B must be positive");
  if (std::gcd(A, B) != 1) throw DomainError("gcd(A, B) must be 1");
}

/// (A/B)(a/d) + b/d mod Z. Two sublattices of the same index are properly
/// isometric iff these agree.
inline Fraction class_invariant(i64 A, i64 B, const SublatticeHNF& k) {
  require_coprime(A, B);
  const __int128 num = static_cast<__int128>(A) * k.a +
                       static_cast<__int128>(B) * k.b;
  const __int128 den = static_cast<__int128>(B) * k.d;
  return Fraction::mod_one(num, den);
}

inline bool properly_isometric(i64 A, i64 B, const SublatticeHNF& k1,
                               const SublatticeHNF& k2) {
  const Fraction f1 = class_invariant(A, B, k1);
  const Fraction f2 = class_invariant(A, B, k2);
  return k1.index() == k2.index() && f1 == f2;
}

}  // namespace hzeta
