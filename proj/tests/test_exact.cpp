#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "branchlab/exact.hpp"

using namespace branchlab;

namespace {

// Reference binomials built by Pascal's rule alone, no factorials, no GMP.
// Row 64 tops out at C(64,32) which still fits in a uint64_t.
const std::vector<std::vector<std::uint64_t>>& pascal_table() {
  static const auto table = [] {
    std::vector<std::vector<std::uint64_t>> t(65);
    for (std::size_t n = 0; n < t.size(); ++n) {
      t[n].assign(n + 1, 1);
      for (std::size_t k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

ExactProb random_rational(std::mt19937_64& rng, long max_num = 1000, long max_den = 1000) {
  std::uniform_int_distribution<long> num(0, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return ExactProb(num(rng), den(rng));
}

}  // namespace

TEST_CASE("binomial agrees with the Pascal construction through n = 64") {
  const auto& pascal = pascal_table();
  for (std::uint64_t n = 0; n <= 64; ++n)
    for (std::uint64_t k = 0; k <= n; ++k)
      CHECK(binomial(n, static_cast<std::int64_t>(k)) == BigInt(pascal[n][k]));
}

TEST_CASE("binomial spot values") {
  CHECK(binomial(3, 1) == 3);
  CHECK(binomial(20, 10) == BigInt(pascal_table()[20][10]));
  CHECK(binomial(20, 10) == 184756);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(0, 0) == 1);
}

TEST_CASE("binomial rows sum to 2^n") {
  for (std::uint64_t n = 0; n <= 64; ++n) {
    BigInt sum(0);
    for (std::uint64_t k = 0; k <= n; ++k) sum += binomial(n, static_cast<std::int64_t>(k));
    BigInt expect;
    mpz_ui_pow_ui(expect.get_mpz_t(), 2, n);
    CHECK(sum == expect);
  }
}

TEST_CASE("binomial satisfies the Pascal recurrence") {
  for (std::uint64_t n = 1; n <= 64; ++n)
    for (std::int64_t k = 0; k <= static_cast<std::int64_t>(n); ++k)
      CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST_CASE("ExactProb canonicalizes and serializes as num/den") {
  const ExactProb half(2, 4);
  CHECK(half.num() == 1);
  CHECK(half.den() == 2);
  CHECK(half.str() == "1/2");
  CHECK(ExactProb(729, 1000).str() == "729/1000");
  CHECK(ExactProb().str() == "0/1");
  CHECK(ExactProb(1).str() == "1/1");
}

TEST_CASE("ExactProb parsing accepts fractions, integers, and decimals") {
  CHECK(ExactProb::parse("9/10") == ExactProb(9, 10));
  CHECK(ExactProb::parse("0.9") == ExactProb(9, 10));
  CHECK(ExactProb::parse(" 2 / 6 ") == ExactProb(1, 3));
  CHECK(ExactProb::parse("3") == ExactProb(3));
  CHECK(ExactProb::parse("1.25") == ExactProb(5, 4));
  CHECK_THROWS_AS(ExactProb::parse("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(ExactProb::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(ExactProb::parse("-1/2"), std::domain_error);
  CHECK_THROWS_AS(ExactProb::parse("1/0"), std::domain_error);
}

TEST_CASE("ExactProb rejects negatives and guards subtraction") {
  CHECK_THROWS_AS(ExactProb(-1, 2), std::domain_error);
  CHECK_THROWS_AS(ExactProb(1, 2) - ExactProb(2, 3), std::domain_error);
  CHECK(ExactProb(2, 3) - ExactProb(1, 2) == ExactProb(1, 6));
  CHECK(ExactProb(1, 3).complement() == ExactProb(2, 3));
  CHECK_THROWS_AS(ExactProb(3, 2).complement(), std::domain_error);
}

TEST_CASE("ExactProb field laws on random triples") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 500; ++trial) {
    const ExactProb a = random_rational(rng);
    const ExactProb b = random_rational(rng);
    const ExactProb c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("ExactProb ordering is exact") {
  CHECK(ExactProb(1, 3) < ExactProb(1, 2));
  CHECK(ExactProb(2, 4) <= ExactProb(1, 2));
  CHECK(ExactProb(999999, 1000000) < ExactProb(1));
}

TEST_CASE("pow_exact spot values") {
  CHECK(pow_exact(ExactProb(9, 10), 3) == ExactProb(729, 1000));
  CHECK(pow_exact(ExactProb(1, 2), 10) == ExactProb(1, 1024));
  CHECK(pow_exact(ExactProb(), 0) == ExactProb(1));
  CHECK(pow_exact(ExactProb(), 5) == ExactProb());
}

TEST_CASE("to_logreal spot values") {
  const LogReal one = to_logreal(ExactProb(1));
  CHECK(one.sign == 1);
  CHECK(one.ln_mag == 0.0);

  CHECK(to_logreal(ExactProb()).is_zero());
  CHECK(to_logreal(ExactProb()).str() == "-inf");

  // ln(1/1024) = -10 ln 2, checked against arithmetic that never touches
  // the mantissa-and-exponent path inside to_logreal.
  const LogReal tiny = to_logreal(ExactProb(1, 1024));
  CHECK(tiny.sign == 1);
  CHECK(tiny.ln_mag == doctest::Approx(-10.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("to_logreal round-trips within 1e-12 relative error") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    ExactProb v = random_rational(rng, 1000000, 1000000);
    if (v.is_zero()) continue;
    const double expect = v.to_double();
    const double got = to_logreal(v).to_double();
    CHECK(std::fabs(got - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("to_logreal is additive over products") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    ExactProb a = random_rational(rng);
    ExactProb b = random_rational(rng);
    if (a.is_zero() || b.is_zero()) continue;
    const double sum = to_logreal(a).ln_mag + to_logreal(b).ln_mag;
    CHECK(to_logreal(a * b).ln_mag == doctest::Approx(sum).epsilon(1e-10));
  }
}

TEST_CASE("LogReal multiplication and zero handling") {
  const LogReal x = LogReal::from_ln(1.5);
  const LogReal y = LogReal::from_ln(-0.5, -1);
  const LogReal p = x * y;
  CHECK(p.sign == -1);
  CHECK(p.ln_mag == doctest::Approx(1.0));
  CHECK((x * LogReal::zero()).is_zero());
  CHECK_THROWS_AS(LogReal::from_ln(0.0, 2), std::invalid_argument);
}

TEST_CASE("log_add stays on log scale") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)).epsilon(1e-14));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add(ninf, 1.25) == 1.25);
  CHECK(log_add(1.25, ninf) == 1.25);
}

TEST_CASE("format_fixed_sig emits 12 significant digits in fixed notation") {
  CHECK(format_fixed_sig(-105.36051565782630) == "-105.360515658");
  CHECK(format_fixed_sig(0.5) == "0.500000000000");
  CHECK(format_fixed_sig(-0.10536051565782630) == "-0.105360515658");
  CHECK(format_fixed_sig(0.0) == "0");
  CHECK(format_fixed_sig(3.0, 3) == "3.00");
  CHECK(format_fixed_sig(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("PhaseRoot reduces to lowest terms in [0, L)") {
  CHECK(PhaseRoot(2, 4) == PhaseRoot(1, 2));
  CHECK(PhaseRoot(-1, 4) == PhaseRoot(3, 4));
  CHECK(PhaseRoot(4, 4) == PhaseRoot::identity());
  CHECK(PhaseRoot(6, 4) == PhaseRoot(1, 2));
  CHECK(PhaseRoot(3, 6).str() == "1/2");
  CHECK_THROWS_AS(PhaseRoot(1, 0), std::domain_error);
}

TEST_CASE("PhaseRoot multiplication lifts to the least common order") {
  CHECK(PhaseRoot(1, 2) * PhaseRoot(1, 3) == PhaseRoot(5, 6));
  CHECK(PhaseRoot(1, 4) * PhaseRoot(1, 4) == PhaseRoot(1, 2));
  CHECK(PhaseRoot(1, 3) * PhaseRoot(2, 3) == PhaseRoot::identity());
}

TEST_CASE("PhaseRoot forms a group under multiplication") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> order(1, 48);
  for (int trial = 0; trial < 500; ++trial) {
    const std::int64_t l = order(rng);
    std::uniform_int_distribution<std::int64_t> num(0, l - 1);
    const PhaseRoot x(num(rng), l);
    const PhaseRoot y(num(rng), l);
    const PhaseRoot z(num(rng), l);
    CHECK(x * x.inverse() == PhaseRoot::identity());
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * PhaseRoot::identity() == x);
  }
}

TEST_CASE("PhaseRoot parse round-trips") {
  const PhaseRoot x(5, 12);
  CHECK(PhaseRoot::parse(x.str()) == x);
  CHECK_THROWS_AS(PhaseRoot::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(PhaseRoot::parse("1/2x"), std::invalid_argument);
}
