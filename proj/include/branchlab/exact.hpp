#pragma once

/**
 * Exact numeric tower.
 *
 * Three value types cover every number the library touches:
 *
 *  - ExactProb: non-negative rational in lowest terms, arbitrary precision.
 *    All branch weights and masses are carried as ExactProb end to end in
 *    exact mode; no rounding ever happens on this path.
 *  - LogReal:   sign + natural-log magnitude, for asymptotic mode where
 *    exact rationals are infeasible (n up to 1e6 and beyond).
 *  - PhaseRoot: a root of unity e^{2*pi*i*k/L} with exact equality.
 *
 * Backed by GMP (mpz/mpq). All types are immutable values; every function
 * here is pure and safe to call from any number of threads.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace branchlab {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Non-negative exact rational, canonicalized to lowest terms with a
/// positive denominator. Serializes as "num/den" (always with the slash).
class ExactProb {
 public:
  ExactProb() : v_(0) {}
  ExactProb(long num, long den = 1);
  ExactProb(const BigInt& num, const BigInt& den);
  explicit ExactProb(const BigRat& v);

  /// Accepts "num/den", a bare integer, or a decimal literal ("0.9" -> 9/10).
  static ExactProb parse(const std::string& text);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  const BigRat& rat() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  /// True when the value lies in [0, 1] and may be used as a probability.
  bool in_unit_interval() const { return v_ <= 1; }

  /// 1 - p. Requires the value to be at most 1.
  ExactProb complement() const;

  ExactProb operator+(const ExactProb& o) const { return ExactProb(BigRat(v_ + o.v_)); }
  ExactProb operator*(const ExactProb& o) const { return ExactProb(BigRat(v_ * o.v_)); }
  /// Exact subtraction; throws std::domain_error if the result would be negative.
  ExactProb operator-(const ExactProb& o) const;

  bool operator==(const ExactProb& o) const { return v_ == o.v_; }
  std::strong_ordering operator<=>(const ExactProb& o) const {
    const int c = cmp(v_, o.v_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  double to_double() const { return v_.get_d(); }
  std::string str() const;

 private:
  BigRat v_;
  void check_non_negative() const;
};

/// C(n, k). Returns 0 when k < 0 or k > n; the zero convention keeps
/// tail-sum loops free of bounds branches.
BigInt binomial(std::uint64_t n, std::int64_t k);

/// p^e, exactly. pow_exact(p, 0) = 1 for every p, including p = 0
/// (empty-product convention).
ExactProb pow_exact(const ExactProb& p, std::uint64_t e);

/// Signed log-scale real: value = sign * exp(ln_mag). sign 0 encodes an
/// exact zero (ln_mag is then -infinity).
struct LogReal {
  int sign = 0;
  double ln_mag = -std::numeric_limits<double>::infinity();

  static LogReal zero() { return LogReal{}; }
  static LogReal from_ln(double ln, int sign = 1);

  bool is_zero() const { return sign == 0; }
  double to_double() const;
  LogReal operator*(const LogReal& o) const;

  /// Ln-magnitude as a fixed-notation decimal with 12 significant digits;
  /// "-inf" for an exact zero. Negative values get a "neg:" prefix (they
  /// never occur in any emitted table).
  std::string str() const;
};

/// Natural log of a positive big integer, accurate to a few ulp.
double ln_big(const BigInt& z);

/// ln(e^a + e^b) without leaving log scale.
double log_add(double a, double b);

LogReal to_logreal(const ExactProb& p);

/// Fixed-notation decimal with `sig` significant digits, locale-independent.
std::string format_fixed_sig(double x, int sig = 12);

/// Root of unity e^{2*pi*i*k/L}, stored with 0 <= k < L and gcd(k, L) = 1,
/// so equality of reduced forms is equality of phases.
class PhaseRoot {
 public:
  PhaseRoot() : k_(0), l_(1) {}
  PhaseRoot(std::int64_t k, std::int64_t l);

  static PhaseRoot identity() { return PhaseRoot(); }
  static PhaseRoot parse(const std::string& text);

  std::int64_t k() const { return k_; }
  std::int64_t l() const { return l_; }
  bool is_identity() const { return k_ == 0; }

  PhaseRoot operator*(const PhaseRoot& o) const;
  PhaseRoot inverse() const;
  bool operator==(const PhaseRoot& o) const { return k_ == o.k_ && l_ == o.l_; }
  bool operator<(const PhaseRoot& o) const {
    return l_ != o.l_ ? l_ < o.l_ : k_ < o.k_;
  }

  std::string str() const;  // "k/L"

 private:
  std::int64_t k_, l_;
};

}  // namespace branchlab
