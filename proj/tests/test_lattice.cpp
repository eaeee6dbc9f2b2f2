#include <gtest/gtest.h>

#include <map>

#include "hzeta/hzeta.hpp"

using namespace hzeta;

namespace {

CanonicalLattice canon(i64 a, i64 b, i64 g) { return canonicalize({a, b, g}); }

CanonicalLattice lat(i64 n, i64 A, i64 B) { return CanonicalLattice{n, A, B}; }

// HNF (alpha, beta mod gamma, gamma) of Z(alpha e1 + beta e2) + Z(gamma e2)
// with alpha, gamma > 0; two such bases span the same lattice iff these agree.
std::array<BigInt, 3> hnf(const BasisTriple& t) {
  BigInt b = t.beta % t.gamma;
  if (b < 0) b += t.gamma;
  return {t.alpha, b, t.gamma};
}

}  // namespace

TEST(Canonicalize, Examples) {
  EXPECT_EQ(canon(2, 3, 4), lat(2, 3, 4));
  EXPECT_EQ(canon(1, 0, 1), lat(1, 1, 1));
  EXPECT_EQ(canon(1, 5, 3), lat(1, 2, 3));
}

TEST(Canonicalize, RankDeficient) {
  EXPECT_THROW(canon(0, 1, 1), DomainError);
  EXPECT_THROW(canon(1, 1, 0), DomainError);
}

TEST(Canonicalize, NegativeSigns) {
  // negating e-vectors of the basis leaves the lattice alone
  EXPECT_EQ(canon(-2, -3, 4), canon(2, 3, 4));
  EXPECT_EQ(canon(2, 3, -4), canon(2, 3, 4));
  EXPECT_EQ(canon(-1, 5, -3), canon(1, -5, 3));
}

TEST(Canonicalize, BigIntegers) {
  const BigInt big = BigInt(1) << 100;
  const auto l = canonicalize({big, big * 3, big * 4});
  EXPECT_EQ(l.n, big * big);
  EXPECT_EQ(l.A, 3);
  EXPECT_EQ(l.B, 4);
  EXPECT_EQ(invariant_B(l), 4);
}

TEST(Canonicalize, ExhaustiveBox) {
  // every basis with |alpha|, |beta|, |gamma| <= 100
  for (i64 a = -100; a <= 100; ++a) {
    if (a == 0) continue;
    for (i64 g = -100; g <= 100; ++g) {
      if (g == 0) continue;
      for (i64 b = -100; b <= 100; ++b) {
        const BasisTriple t{a, b, g};
        const BasisTriple c = canonical_basis(t);
        const CanonicalLattice l = canonicalize(t);
        ASSERT_GE(l.A, 1);
        ASSERT_LE(l.A, l.B);
        ASSERT_EQ(boost::multiprecision::gcd(l.A, l.B), 1);
        ASSERT_GE(l.n, 1);
        // same subgroup
        const BasisTriple pos{a < 0 ? BigInt(-a) : BigInt(a), a < 0 ? BigInt(-b) : BigInt(b),
                              g < 0 ? BigInt(-g) : BigInt(g)};
        ASSERT_EQ(hnf(c), hnf(pos)) << a << " " << b << " " << g;
        // Gram of the reduced basis: Q(alpha e1 + beta' e2) = alpha beta',
        // B(v1, gamma e2) = alpha gamma / 2
        ASSERT_EQ(c.alpha * c.beta, l.n * l.A);
        ASSERT_EQ(c.alpha * c.gamma, l.n * l.B);
      }
    }
  }
}

TEST(Canonicalize, Idempotent) {
  for (i64 a = -30; a <= 30; ++a) {
    for (i64 b = -30; b <= 30; ++b) {
      for (i64 g = -30; g <= 30; ++g) {
        if (a == 0 || g == 0) continue;
        const auto l = canonicalize({a, b, g});
        ASSERT_EQ(canonicalize(to_basis(l)), l);
        ASSERT_EQ(canonicalize(canonical_basis({a, b, g})), l);
      }
    }
  }
}

TEST(Gram, Examples) {
  using R = BigRational;
  const auto g1 = gram(lat(1, 1, 1));
  EXPECT_EQ(g1[0], R(1));
  EXPECT_EQ(g1[1], R(1, 2));
  EXPECT_EQ(g1[2], R(1, 2));
  EXPECT_EQ(g1[3], R(0));
  const auto g2 = gram(lat(2, 3, 4));
  EXPECT_EQ(g2[0], R(6));
  EXPECT_EQ(g2[1], R(4));
  EXPECT_EQ(g2[3], R(0));
  const auto g3 = gram(lat(3, 1, 2));
  EXPECT_EQ(g3[0], R(3));
  EXPECT_EQ(g3[1], R(3));
}

TEST(Gram, Determinant) {
  for (i64 n = 1; n <= 6; ++n) {
    for (i64 B = 1; B <= 12; ++B) {
      for (i64 A = 1; A <= B; ++A) {
        if (std::gcd(A, B) != 1) continue;
        const auto g = gram(lat(n, A, B));
        EXPECT_EQ(g[0] * g[3] - g[1] * g[2], -BigRational(n * n * B * B, 4));
      }
    }
  }
}

TEST(Gram, RejectsNonCanonical) {
  EXPECT_THROW(gram(lat(1, 2, 4)), DomainError);
  EXPECT_THROW(gram(lat(0, 1, 1)), DomainError);
  EXPECT_THROW(gram(lat(1, 5, 4)), DomainError);
}

TEST(InvariantB, Examples) {
  EXPECT_EQ(invariant_B(lat(1, 1, 1)), 1);
  EXPECT_EQ(invariant_B(lat(2, 3, 4)), 4);
  EXPECT_EQ(invariant_B(lat(5, 1, 2)), 2);
}

TEST(InvariantB, AllSmallLattices) {
  for (i64 n = 1; n <= 10; ++n) {
    for (i64 B = 1; B <= 30; ++B) {
      for (i64 A = 1; A <= B; ++A) {
        if (std::gcd(A, B) == 1) EXPECT_EQ(invariant_B(lat(n, A, B)), B);
      }
    }
  }
}

TEST(ClassInvariant, Examples) {
  EXPECT_EQ(class_invariant(1, 1, {1, 0, 2}).str(), "1/2");
  EXPECT_EQ(class_invariant(1, 1, {1, 1, 2}).str(), "0/1");
  EXPECT_EQ(class_invariant(1, 2, {1, 1, 2}).str(), "3/4");
  EXPECT_THROW(class_invariant(2, 4, {1, 0, 1}), DomainError);
  EXPECT_THROW(class_invariant(1, 0, {1, 0, 1}), DomainError);
}

TEST(SublatticeHNF, Validation) {
  EXPECT_THROW(SublatticeHNF(0, 0, 1), DomainError);
  EXPECT_THROW(SublatticeHNF(1, 2, 2), DomainError);
  EXPECT_THROW(SublatticeHNF(1, -1, 2), DomainError);
  EXPECT_EQ(SublatticeHNF(3, 1, 4).index(), 12);
}

TEST(Fraction, Reduction) {
  EXPECT_EQ(Fraction::mod_one(6, 4).str(), "1/2");
  EXPECT_EQ(Fraction::mod_one(-1, 3).str(), "2/3");
  EXPECT_EQ(Fraction::mod_one(1, -3).str(), "2/3");
  EXPECT_EQ(Fraction::mod_one(5, 5).str(), "0/1");
  EXPECT_THROW(Fraction::mod_one(1, 0), DomainError);
}

TEST(ProperlyIsometric, Examples) {
  EXPECT_TRUE(properly_isometric(1, 1, {1, 1, 2}, {2, 0, 1}));
  EXPECT_FALSE(properly_isometric(1, 1, {1, 0, 2}, {2, 0, 1}));
  EXPECT_TRUE(properly_isometric(3, 7, {2, 1, 3}, {2, 1, 3}));
  // different index never matches
  EXPECT_FALSE(properly_isometric(1, 1, {1, 0, 1}, {1, 0, 2}));
}

TEST(ProperlyIsometric, EquivalenceRelation) {
  for (i64 B : {1, 2, 3, 5, 6}) {
    for (i64 A = 1; A <= B; ++A) {
      if (std::gcd(A, B) != 1) continue;
      for (u64 m = 1; m <= 50; ++m) {
        const auto ks = enumerate_sublattices(m);
        const std::size_t n = ks.size();
        std::vector<std::vector<char>> rel(n, std::vector<char>(n));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            rel[i][j] = properly_isometric(A, B, ks[i], ks[j]);
          }
        }
        for (std::size_t i = 0; i < n; ++i) {
          ASSERT_TRUE(rel[i][i]);
          for (std::size_t j = 0; j < n; ++j) {
            ASSERT_EQ(rel[i][j], rel[j][i]);
            if (!rel[i][j]) continue;
            for (std::size_t k = 0; k < n; ++k) {
              if (rel[j][k]) ASSERT_TRUE(rel[i][k]) << m;
            }
          }
        }
      }
    }
  }
}

TEST(ProperlyIsometric, ScalingInvariance) {
  // class counts read only (A, B); n never enters the invariant
  for (i64 n : {1, 2, 7}) {
    for (i64 B : {3, 4, 10}) {
      const auto l = lat(n, 1, B);
      for (u64 m = 1; m <= 30; ++m) {
        EXPECT_EQ(bruteforce_am(to_i64(l.A, "A"), to_i64(l.B, "B"), m),
                  bruteforce_am(1, B, m));
      }
    }
  }
}

TEST(ProperlyIsometric, ScaledBasisKeepsAB) {
  for (i64 a = 1; a <= 12; ++a) {
    for (i64 b = -12; b <= 12; ++b) {
      for (i64 g = 1; g <= 12; ++g) {
        const auto l = canon(a, b, g);
        for (i64 k : {2, 3, 11}) {
          const auto s = canon(a * k, b, g);
          ASSERT_EQ(s.A, l.A);
          ASSERT_EQ(s.B, l.B);
          ASSERT_EQ(s.n, l.n * k);
        }
      }
    }
  }
}
