#pragma once

/**
 * ExactScalar: exact complex amplitudes of the form
 *
 *     sum_t  c_t * sqrt(r_t) * e^{2*pi*i*k_t/L_t}
 *
 * with c_t rational and r_t a positive integer. Inner products of states
 * whose squared magnitudes are rational and whose phases are roots of unity
 * land in this set, which is closed under addition and negation.
 *
 * Equality is decided symbolically, not numerically:
 *  - each radicand is reduced by extracting its largest detectable square
 *    factor (trial division by primes up to 100000, plus a perfect-square
 *    check on the cofactor), so equal values get equal radicands whenever
 *    every repeated prime factor is below that bound or the cofactor is a
 *    full square;
 *  - within one radicand, the phase coefficients are read as a polynomial
 *    in a primitive L-th root of unity and reduced modulo the L-th
 *    cyclotomic polynomial, which decides membership in the ideal of
 *    vanishing combinations completely;
 *  - distinct reduced radicands are treated as independent.
 *
 * Equal canonical forms therefore always mean equal values, and the test is
 * complete as long as radicands stay within the factoring bound. Products of
 * the rational squared magnitudes this library constructs stay far below it.
 */

#include <map>
#include <string>
#include <vector>

#include "branchlab/exact.hpp"

namespace branchlab {

class ExactScalar {
 public:
  ExactScalar() = default;  // zero

  static ExactScalar from_rational(const BigRat& c);
  /// c * sqrt(q) * phase for a non-negative rational q.
  static ExactScalar sqrt_term(const ExactProb& q, const PhaseRoot& phase,
                               const BigRat& c = BigRat(1));

  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar operator+(const ExactScalar& o) const;
  ExactScalar operator-() const;
  ExactScalar operator-(const ExactScalar& o) const;

  bool is_zero() const;
  bool operator==(const ExactScalar& o) const { return (*this - o).is_zero(); }

  std::string str() const;  // diagnostic rendering, sorted term order

 private:
  struct Key {
    BigInt radicand;  // square-free up to the factoring bound, >= 1
    PhaseRoot phase;
    bool operator<(const Key& o) const {
      const int c = cmp(radicand, o.radicand);
      if (c != 0) return c < 0;
      return phase < o.phase;
    }
  };

  std::map<Key, BigRat> terms_;

  void add_term(const BigInt& radicand, const PhaseRoot& phase, const BigRat& c);
};

/// Coefficients of the L-th cyclotomic polynomial, constant term first.
std::vector<BigInt> cyclotomic(std::int64_t l);

/// sqrt(n) = s * sqrt(r) with n = s^2 * r and r square-free up to the
/// factoring bound described above. Requires n >= 1.
std::pair<BigInt, BigInt> extract_square(const BigInt& n);

}  // namespace branchlab
