#include "branchlab/scalar.hpp"

#include <numeric>
#include <stdexcept>

namespace branchlab {

namespace {

constexpr unsigned long kFactorBound = 100000;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> composite(kFactorBound + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long p = 2; p <= kFactorBound; ++p) {
      if (composite[p]) continue;
      out.push_back(p);
      for (unsigned long q = p * p; q <= kFactorBound; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

// Divides the polynomial `num` by `den` (both constant-term first, den monic),
// asserting an exact division. Used only to build cyclotomic polynomials.
std::vector<BigInt> poly_divide_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
  if (den.empty() || den.back() != 1) throw std::logic_error("divisor must be monic");
  if (num.size() < den.size()) throw std::logic_error("degree underflow");
  std::vector<BigInt> quot(num.size() - den.size() + 1);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const BigInt c = num[i + den.size() - 1];
    quot[i] = c;
    if (sgn(c) == 0) continue;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (const BigInt& c : num)
    if (sgn(c) != 0) throw std::logic_error("inexact polynomial division");
  return quot;
}

// Remainder of a rational-coefficient polynomial modulo a monic integer
// polynomial, in place.
void poly_mod(std::vector<BigRat>& v, const std::vector<BigInt>& m) {
  const std::size_t deg = m.size() - 1;
  for (std::size_t i = v.size(); i-- > deg;) {
    BigRat c = v[i];
    if (sgn(c) == 0) continue;
    v[i] = 0;
    for (std::size_t j = 0; j < deg; ++j) {
      v[i - deg + j] -= c * m[j];
      v[i - deg + j].canonicalize();
    }
  }
}

}  // namespace

std::vector<BigInt> cyclotomic(std::int64_t l) {
  if (l <= 0) throw std::domain_error("cyclotomic index must be positive");
  // x^l - 1 divided by the cyclotomic polynomials of all proper divisors.
  std::vector<BigInt> poly(static_cast<std::size_t>(l) + 1);
  poly.front() = -1;
  poly.back() = 1;
  for (std::int64_t d = 1; d < l; ++d)
    if (l % d == 0) poly = poly_divide_exact(std::move(poly), cyclotomic(d));
  return poly;
}

std::pair<BigInt, BigInt> extract_square(const BigInt& n) {
  if (sgn(n) <= 0) throw std::domain_error("radicand must be positive");
  BigInt rest = n, scale = 1, radicand = 1;
  for (unsigned long p : small_primes()) {
    if (BigInt(p) * p > rest) break;
    unsigned int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e == 0) continue;
    BigInt pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), p, e / 2);
    scale *= pw;
    if (e % 2) radicand *= p;
  }
  if (rest != 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      BigInt root;
      mpz_sqrt(root.get_mpz_t(), rest.get_mpz_t());
      scale *= root;
    } else {
      radicand *= rest;
    }
  }
  return {scale, radicand};
}

ExactScalar ExactScalar::from_rational(const BigRat& c) {
  ExactScalar s;
  s.add_term(BigInt(1), PhaseRoot::identity(), c);
  return s;
}

ExactScalar ExactScalar::sqrt_term(const ExactProb& q, const PhaseRoot& phase, const BigRat& c) {
  ExactScalar s;
  if (q.is_zero() || sgn(c) == 0) return s;
  // sqrt(a/b) = sqrt(a*b)/b, then pull the square part out of a*b.
  const auto [scale, radicand] = extract_square(q.num() * q.den());
  BigRat coeff = c * scale;
  coeff /= q.den();
  coeff.canonicalize();
  s.add_term(radicand, phase, coeff);
  return s;
}

void ExactScalar::add_term(const BigInt& radicand, const PhaseRoot& phase, const BigRat& c) {
  if (sgn(c) == 0) return;
  const Key key{radicand, phase};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
    return;
  }
  it->second += c;
  it->second.canonicalize();
  if (sgn(it->second) == 0) terms_.erase(it);
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.radicand, key.phase, c);
  return *this;
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
  ExactScalar s = *this;
  s += o;
  return s;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar s = *this;
  for (auto& [key, c] : s.terms_) c = -c;
  return s;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const { return *this + (-o); }

bool ExactScalar::is_zero() const {
  if (terms_.empty()) return true;

  // Group by radicand; values over distinct square-free radicands are
  // linearly independent, so each group must vanish on its own.
  auto it = terms_.begin();
  while (it != terms_.end()) {
    const BigInt& radicand = it->first.radicand;
    std::int64_t order = 1;
    auto group_end = it;
    while (group_end != terms_.end() && group_end->first.radicand == radicand) {
      const std::int64_t l = group_end->first.phase.l();
      const std::int64_t g = std::gcd(order, l);
      const __int128 lcm = static_cast<__int128>(order / g) * l;
      if (lcm > (std::int64_t(1) << 40)) throw std::overflow_error("phase order blowup");
      order = static_cast<std::int64_t>(lcm);
      ++group_end;
    }

    if (order == 1) return false;  // a lone rational term, already non-zero

    std::vector<BigRat> poly(static_cast<std::size_t>(order));
    for (auto t = it; t != group_end; ++t) {
      const auto exponent = t->first.phase.k() * (order / t->first.phase.l());
      poly[static_cast<std::size_t>(exponent)] += t->second;
      poly[static_cast<std::size_t>(exponent)].canonicalize();
    }
    poly_mod(poly, cyclotomic(order));
    for (const BigRat& c : poly)
      if (sgn(c) != 0) return false;

    it = group_end;
  }
  return true;
}

std::string ExactScalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.get_str();
    if (key.radicand != 1) out += "*sqrt(" + key.radicand.get_str() + ")";
    if (!key.phase.is_identity()) out += "*zeta(" + key.phase.str() + ")";
  }
  return out;
}

}  // namespace branchlab
