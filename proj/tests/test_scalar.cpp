#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "branchlab/scalar.hpp"

using namespace branchlab;

TEST_CASE("extract_square pulls out the full square part") {
  CHECK(extract_square(BigInt(12)) == std::pair<BigInt, BigInt>(2, 3));
  CHECK(extract_square(BigInt(49)) == std::pair<BigInt, BigInt>(7, 1));
  CHECK(extract_square(BigInt(1)) == std::pair<BigInt, BigInt>(1, 1));
  CHECK(extract_square(BigInt(360)) == std::pair<BigInt, BigInt>(6, 10));
  CHECK_THROWS_AS(extract_square(BigInt(0)), std::domain_error);

  // 100003 is prime and sits past the trial-division bound; its square is
  // still recognized by the perfect-square check on the cofactor.
  const BigInt p(100003);
  CHECK(extract_square(p * p) == std::pair<BigInt, BigInt>(p, 1));
  CHECK(extract_square(p * p * 2) == std::pair<BigInt, BigInt>(p, 2));
}

TEST_CASE("cyclotomic polynomials match the classical small cases") {
  CHECK(cyclotomic(1) == std::vector<BigInt>{-1, 1});
  CHECK(cyclotomic(2) == std::vector<BigInt>{1, 1});
  CHECK(cyclotomic(3) == std::vector<BigInt>{1, 1, 1});
  CHECK(cyclotomic(4) == std::vector<BigInt>{1, 0, 1});
  CHECK(cyclotomic(6) == std::vector<BigInt>{1, -1, 1});
  CHECK(cyclotomic(12) == std::vector<BigInt>{1, 0, -1, 0, 1});
}

TEST_CASE("rational scalars compare exactly") {
  CHECK(ExactScalar::from_rational(BigRat(1)) == ExactScalar::sqrt_term(ExactProb(1), PhaseRoot()));
  CHECK(ExactScalar() == ExactScalar::from_rational(BigRat(0)));
  CHECK(ExactScalar::from_rational(BigRat(1, 2)) + ExactScalar::from_rational(BigRat(1, 2)) ==
        ExactScalar::from_rational(BigRat(1)));
  CHECK_FALSE(ExactScalar::from_rational(BigRat(1)) == ExactScalar::from_rational(BigRat(2)));
}

TEST_CASE("radicals canonicalize through square extraction") {
  // sqrt(8) = 2 sqrt(2)
  CHECK(ExactScalar::sqrt_term(ExactProb(8), PhaseRoot()) ==
        ExactScalar::sqrt_term(ExactProb(2), PhaseRoot(), BigRat(2)));
  // sqrt(1/2) = sqrt(2)/2
  CHECK(ExactScalar::sqrt_term(ExactProb(1, 2), PhaseRoot()) ==
        ExactScalar::sqrt_term(ExactProb(2), PhaseRoot(), BigRat(1, 2)));
  // sqrt(9/4) = 3/2, a plain rational
  CHECK(ExactScalar::sqrt_term(ExactProb(9, 4), PhaseRoot()) ==
        ExactScalar::from_rational(BigRat(3, 2)));
  CHECK_FALSE(ExactScalar::sqrt_term(ExactProb(2), PhaseRoot()) ==
              ExactScalar::sqrt_term(ExactProb(3), PhaseRoot()));
  // sqrt(2) + sqrt(3) is not sqrt(5); distinct radicands stay independent
  CHECK_FALSE(ExactScalar::sqrt_term(ExactProb(2), PhaseRoot()) +
                  ExactScalar::sqrt_term(ExactProb(3), PhaseRoot()) ==
              ExactScalar::sqrt_term(ExactProb(5), PhaseRoot()));
}

TEST_CASE("roots of unity reduce modulo the cyclotomic relations") {
  const auto one = [](const PhaseRoot& ph) { return ExactScalar::sqrt_term(ExactProb(1), ph); };

  // zeta_2 = -1
  CHECK(one(PhaseRoot(1, 2)) == ExactScalar::from_rational(BigRat(-1)));
  // 1 + zeta_3 + zeta_3^2 = 0
  CHECK((one(PhaseRoot()) + one(PhaseRoot(1, 3)) + one(PhaseRoot(2, 3))).is_zero());
  // zeta_6 = 1 + zeta_3, an identity across different root orders
  CHECK(one(PhaseRoot(1, 6)) == one(PhaseRoot()) + one(PhaseRoot(1, 3)));
  // zeta_4 and zeta_4^3 are conjugates summing to 0
  CHECK((one(PhaseRoot(1, 4)) + one(PhaseRoot(3, 4))).is_zero());
  // but zeta_4 alone is not rational
  CHECK_FALSE(one(PhaseRoot(1, 4)) == ExactScalar::from_rational(BigRat(1)));
  CHECK_FALSE(one(PhaseRoot(1, 4)).is_zero());
}

TEST_CASE("mixed radical and phase terms do not collapse") {
  const ExactScalar a = ExactScalar::sqrt_term(ExactProb(2), PhaseRoot(1, 4));
  const ExactScalar b = ExactScalar::sqrt_term(ExactProb(2), PhaseRoot(3, 4));
  CHECK((a + b).is_zero());
  CHECK_FALSE((a + a).is_zero());
  CHECK(a - a == ExactScalar());
}

TEST_CASE("subtraction and negation behave additively") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> small(1, 40);
  std::uniform_int_distribution<std::int64_t> ord(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t l = ord(rng);
    std::uniform_int_distribution<std::int64_t> num(0, l - 1);
    const ExactScalar x = ExactScalar::sqrt_term(ExactProb(small(rng), small(rng)),
                                                 PhaseRoot(num(rng), l), BigRat(small(rng)));
    const ExactScalar y = ExactScalar::sqrt_term(ExactProb(small(rng), small(rng)),
                                                 PhaseRoot(num(rng), l), BigRat(small(rng)));
    CHECK(x + y - y == x);
    CHECK((x - x).is_zero());
    CHECK(x + (-x) == ExactScalar());
  }
}
