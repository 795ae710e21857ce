#include "branchlab/exact.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace branchlab {

namespace {

BigRat make_canonical(BigInt num, BigInt den) {
  if (sgn(den) == 0) throw std::domain_error("zero denominator");
  BigRat v(std::move(num), std::move(den));
  v.canonicalize();
  return v;
}

}  // namespace

void ExactProb::check_non_negative() const {
  if (sgn(v_) < 0) throw std::domain_error("negative value where a non-negative rational is required");
}

ExactProb::ExactProb(long num, long den) : v_(make_canonical(BigInt(num), BigInt(den))) {
  check_non_negative();
}

ExactProb::ExactProb(const BigInt& num, const BigInt& den) : v_(make_canonical(num, den)) {
  check_non_negative();
}

ExactProb::ExactProb(const BigRat& v) : v_(v) {
  v_.canonicalize();
  check_non_negative();
}

ExactProb ExactProb::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const BigInt num(s.substr(0, slash));
      const BigInt den(s.substr(slash + 1));
      return ExactProb(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      const std::string whole = s.substr(0, dot);
      const std::string frac = s.substr(dot + 1);
      if (frac.empty()) return ExactProb(BigInt(whole.empty() ? "0" : whole), BigInt(1));
      BigInt den(1);
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const bool neg = !whole.empty() && whole[0] == '-';
      const std::string whole_digits = neg ? whole.substr(1) : whole;
      BigInt num = BigInt(whole_digits.empty() ? "0" : whole_digits) * den + BigInt(frac);
      if (neg) num = -num;
      return ExactProb(num, den);
    }
    return ExactProb(BigInt(s), BigInt(1));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  }
}

ExactProb ExactProb::complement() const {
  if (v_ > 1) throw std::domain_error("complement of a value above 1");
  return ExactProb(BigRat(1 - v_));
}

ExactProb ExactProb::operator-(const ExactProb& o) const {
  if (v_ < o.v_) throw std::domain_error("subtraction would go negative");
  return ExactProb(BigRat(v_ - o.v_));
}

std::string ExactProb::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

BigInt binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
  return r;
}

ExactProb pow_exact(const ExactProb& p, std::uint64_t e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), p.num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), p.den().get_mpz_t(), e);
  return ExactProb(num, den);
}

LogReal LogReal::from_ln(double ln, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  return LogReal{sign, ln};
}

double LogReal::to_double() const { return sign == 0 ? 0.0 : sign * std::exp(ln_mag); }

LogReal LogReal::operator*(const LogReal& o) const {
  if (sign == 0 || o.sign == 0) return zero();
  return LogReal{sign * o.sign, ln_mag + o.ln_mag};
}

std::string LogReal::str() const {
  if (sign == 0) return "-inf";
  const std::string body = format_fixed_sig(ln_mag);
  return sign < 0 ? "neg:" + body : body;
}

double ln_big(const BigInt& z) {
  if (sgn(z) <= 0) throw std::domain_error("ln of a non-positive integer");
  signed long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

LogReal to_logreal(const ExactProb& p) {
  if (p.is_zero()) return LogReal::zero();
  return LogReal::from_ln(ln_big(p.num()) - ln_big(p.den()));
}

std::string format_fixed_sig(double x, int sig) {
  if (sig < 1) throw std::invalid_argument("significant digits must be positive");
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";

  const int lead = static_cast<int>(std::floor(std::log10(std::fabs(x)))) + 1;
  int precision = sig - lead;
  if (precision < 0) precision = 0;
  if (precision > 60) precision = 60;

  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, precision);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

PhaseRoot::PhaseRoot(std::int64_t k, std::int64_t l) {
  if (l <= 0) throw std::domain_error("root order must be positive");
  k %= l;
  if (k < 0) k += l;
  const std::int64_t g = std::gcd(k, l);
  if (k == 0) {
    k_ = 0;
    l_ = 1;
  } else {
    k_ = k / g;
    l_ = l / g;
  }
}

PhaseRoot PhaseRoot::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("phase literal must be k/L");
  std::size_t pos_k = 0, pos_l = 0;
  const std::int64_t k = std::stoll(text.substr(0, slash), &pos_k);
  const std::int64_t l = std::stoll(text.substr(slash + 1), &pos_l);
  if (pos_k != slash || pos_l != text.size() - slash - 1)
    throw std::invalid_argument("phase literal must be k/L");
  return PhaseRoot(k, l);
}

PhaseRoot PhaseRoot::operator*(const PhaseRoot& o) const {
  const std::int64_t g = std::gcd(l_, o.l_);
  const __int128 lcm = static_cast<__int128>(l_ / g) * o.l_;
  if (lcm > std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("root order overflow");
  const std::int64_t l = static_cast<std::int64_t>(lcm);
  const __int128 k = static_cast<__int128>(k_) * (l / l_) + static_cast<__int128>(o.k_) * (l / o.l_);
  return PhaseRoot(static_cast<std::int64_t>(k % l), l);
}

PhaseRoot PhaseRoot::inverse() const { return PhaseRoot(l_ - k_, l_); }

std::string PhaseRoot::str() const {
  return std::to_string(k_) + "/" + std::to_string(l_);
}

}  // namespace branchlab
