#include "branchlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace branchlab::measures {

std::string mode_str(Mode m) { return m == Mode::exact ? "exact" : "asymptotic"; }

std::optional<Mode> mode_parse(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "asymptotic") return Mode::asymptotic;
  return std::nullopt;
}

MaverickRule::MaverickRule(ExactProb eps, Cmp c) : epsilon(std::move(eps)), cmp(c) {
  if (epsilon.is_zero() || !(epsilon < ExactProb(1)))
    throw std::domain_error("epsilon must lie strictly between 0 and 1");
}

bool MaverickRule::is_maverick(std::uint64_t k, std::uint64_t n, const ExactProb& p) const {
  if (n == 0) throw std::domain_error("empty ensemble has no deviation");
  // |k/n - p| vs epsilon, cleared of denominators:
  // |k*den(p) - n*num(p)| * den(eps)  vs  num(eps) * n * den(p)
  BigInt lhs = BigInt(k) * p.den() - BigInt(n) * p.num();
  if (sgn(lhs) < 0) lhs = -lhs;
  lhs *= epsilon.den();
  const BigInt rhs = epsilon.num() * n * p.den();
  return cmp == Cmp::strict ? lhs > rhs : lhs >= rhs;
}

ExactCapExceeded::ExactCapExceeded(std::uint64_t n, std::uint64_t cap)
    : std::runtime_error("exact mode capped at n = " + std::to_string(cap) + ", requested n = " +
                         std::to_string(n) + "; rerun with --mode asymptotic or raise --cap") {}

namespace {

std::uint64_t integer_exponent(const MeasureSpec& spec) {
  if (!spec.integer_alpha() || sgn(spec.alpha) < 0)
    throw std::invalid_argument(
        "exact mode needs a non-negative integer alpha; use asymptotic mode");
  if (!spec.alpha.get_num().fits_ulong_p()) throw std::invalid_argument("alpha too large");
  return spec.alpha.get_num().get_ui();
}

MaverickReport finish_exact(std::uint64_t n, const ExactProb& p, const MeasureSpec& spec,
                            const MaverickRule& rule, const BigInt& maverick_sum,
                            const BigInt& total) {
  MaverickReport r;
  r.n = n;
  r.p = p;
  r.epsilon = rule.epsilon;
  r.alpha = spec.alpha;
  r.mode = Mode::exact;
  r.maverick_mass = ExactProb(maverick_sum, total);
  r.nonmaverick_mass = ExactProb(total - maverick_sum, total);
  r.maverick_ln = to_logreal(*r.maverick_mass);
  r.nonmaverick_ln = to_logreal(*r.nonmaverick_mass);
  return r;
}

// Shared exact accumulation over the n+1 classes. `weight_of` yields the
// un-normalized class weight; summation order is k ascending, so results are
// bit-for-bit reproducible.
template <typename WeightFn>
MaverickReport accumulate_exact(std::uint64_t n, const ExactProb& p, const MeasureSpec& spec,
                                const MaverickRule& rule, WeightFn&& weight_of) {
  BigInt total(0), maverick(0);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const BigInt u = weight_of(k);
    total += u;
    if (rule.is_maverick(k, n, p)) maverick += u;
  }
  return finish_exact(n, p, spec, rule, maverick, total);
}

}  // namespace

MaverickReport measure_mass(const branching::BranchEnsemble& ensemble, const MeasureSpec& spec,
                            const MaverickRule& rule, std::uint64_t cap) {
  const std::uint64_t n = ensemble.n();
  if (n == 0) throw std::domain_error("empty ensemble");
  if (n > cap) throw ExactCapExceeded(n, cap);
  const std::uint64_t e = integer_exponent(spec);

  // u_k = count(k) * born(k)^e, cleared of the common denominator. born(k)
  // already contains one factor of count(k), so divide it back out of the
  // numerator: born(k) = count(k) * a^k c^(n-k) / b^n.
  const ExactProb& p = ensemble.p();
  BigInt bn;
  mpz_pow_ui(bn.get_mpz_t(), p.den().get_mpz_t(), n);
  return accumulate_exact(n, p, spec, rule, [&](std::uint64_t k) {
    const branching::OutcomeClass& cls = ensemble.at(k);
    if (e == 0) return cls.count;
    // (born * b^n / count)^e is the integer a^k c^(n-k); recover it exactly.
    BigInt core = cls.born_weight.num() * bn;
    mpz_divexact(core.get_mpz_t(), core.get_mpz_t(), cls.born_weight.den().get_mpz_t());
    mpz_divexact(core.get_mpz_t(), core.get_mpz_t(), cls.count.get_mpz_t());
    BigInt u;
    mpz_pow_ui(u.get_mpz_t(), core.get_mpz_t(), e);
    return BigInt(cls.count * u);
  });
}

MaverickReport measure_mass_streaming(std::uint64_t n, const ExactProb& p,
                                      const MeasureSpec& spec, const MaverickRule& rule,
                                      std::uint64_t cap) {
  if (n == 0) throw std::domain_error("empty ensemble");
  if (!p.in_unit_interval()) throw std::domain_error("p out of range");
  if (n > cap) throw ExactCapExceeded(n, cap);
  const std::uint64_t e = integer_exponent(spec);

  const BigInt a = p.num();
  const BigInt c = p.den() - a;

  if (e == 0 || sgn(a) == 0 || sgn(c) == 0) {
    // Counting measure, or a degenerate preparation where a single class
    // holds all quadratic weight.
    const std::uint64_t hot = sgn(a) == 0 ? 0 : n;
    BigInt count(1);
    BigInt total(0), maverick(0);
    for (std::uint64_t k = 0; k <= n; ++k) {
      const BigInt u = e == 0 ? count : BigInt(k == hot ? 1 : 0);
      total += u;
      if (rule.is_maverick(k, n, p)) maverick += u;
      if (k < n) count = count * BigInt(n - k) / BigInt(k + 1);
    }
    return finish_exact(n, p, spec, rule, maverick, total);
  }

  BigInt ae, ce;
  mpz_pow_ui(ae.get_mpz_t(), a.get_mpz_t(), e);
  mpz_pow_ui(ce.get_mpz_t(), c.get_mpz_t(), e);

  BigInt count(1);
  BigInt w;
  mpz_pow_ui(w.get_mpz_t(), ce.get_mpz_t(), n);  // (c^e)^n, then *a^e/c^e per step
  BigInt total(0), maverick(0);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const BigInt u = count * w;
    total += u;
    if (rule.is_maverick(k, n, p)) maverick += u;
    if (k < n) {
      count = count * BigInt(n - k) / BigInt(k + 1);
      w *= ae;
      mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), ce.get_mpz_t());
    }
  }
  return finish_exact(n, p, spec, rule, maverick, total);
}

MaverickReport measure_mass_asymptotic(std::uint64_t n, const ExactProb& p,
                                       const MeasureSpec& spec, const MaverickRule& rule) {
  if (n == 0) throw std::domain_error("empty ensemble");
  if (!p.in_unit_interval()) throw std::domain_error("p out of range");
  if (sgn(spec.alpha) < 0) throw std::invalid_argument("alpha must be non-negative");

  MaverickReport r;
  r.n = n;
  r.p = p;
  r.epsilon = rule.epsilon;
  r.alpha = spec.alpha;
  r.mode = Mode::asymptotic;

  const double alpha = spec.alpha.get_d();
  const bool degenerate = (p.is_zero() || p.is_one()) && alpha > 0.0;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  double maverick = kNegInf, nonmaverick = kNegInf;
  if (degenerate) {
    // All quadratic-family weight sits in the single surviving class.
    const std::uint64_t hot = p.is_zero() ? 0 : n;
    (rule.is_maverick(hot, n, p) ? maverick : nonmaverick) = 0.0;
  } else {
    const double lnp = p.is_zero() ? 0.0 : to_logreal(p).ln_mag;
    const double lnq = p.is_one() ? 0.0 : to_logreal(p.complement()).ln_mag;
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::uint64_t k = 0; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double nk = static_cast<double>(n - k);
      const double ln_count = lgn - std::lgamma(kk + 1.0) - std::lgamma(nk + 1.0);
      const double ln_u = ln_count + alpha * (kk * lnp + nk * lnq);
      double& bucket = rule.is_maverick(k, n, p) ? maverick : nonmaverick;
      bucket = log_add(bucket, ln_u);
    }
  }

  const double total = log_add(maverick, nonmaverick);
  r.maverick_ln = maverick == kNegInf ? LogReal::zero() : LogReal::from_ln(maverick - total);
  r.nonmaverick_ln =
      nonmaverick == kNegInf ? LogReal::zero() : LogReal::from_ln(nonmaverick - total);
  return r;
}

LogReal hoeffding_bound(std::uint64_t n, const ExactProb& epsilon) {
  if (epsilon.is_zero()) throw std::domain_error("epsilon must be positive");
  const ExactProb eps2 = epsilon * epsilon;
  return LogReal::from_ln(M_LN2 - 2.0 * static_cast<double>(n) * eps2.to_double());
}

ExactProb counting_tail_mass(std::uint64_t n, const ExactProb& a) {
  if (n == 0) throw std::domain_error("empty ensemble");
  // smallest k with k/n >= a, i.e. ceil(n * num / den)
  BigInt k_min = BigInt(n) * a.num() + a.den() - 1;
  mpz_fdiv_q(k_min.get_mpz_t(), k_min.get_mpz_t(), a.den().get_mpz_t());
  if (k_min > n) return ExactProb();
  if (sgn(k_min) < 0) k_min = 0;

  BigInt sum(0);
  for (std::uint64_t k = k_min.get_ui(); k <= n; ++k) sum += binomial(n, static_cast<std::int64_t>(k));
  BigInt denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, n);
  return ExactProb(sum, denom);
}

ExactProb born_class_mass(std::uint64_t n, const ExactProb& p, const ExactProb& a) {
  if (n == 0) throw std::domain_error("empty ensemble");
  if (!p.in_unit_interval() || !a.in_unit_interval())
    throw std::domain_error("arguments must lie in [0, 1]");
  // nearest integer to a*n, floor(a*n + 1/2)
  BigInt k = BigInt(n) * a.num() * 2 + a.den();
  mpz_fdiv_q(k.get_mpz_t(), k.get_mpz_t(), BigInt(a.den() * 2).get_mpz_t());
  const std::uint64_t kk = k.get_ui();

  const ExactProb w = pow_exact(p, kk) * pow_exact(p.complement(), n - kk);
  return ExactProb(binomial(n, static_cast<std::int64_t>(kk)) * w.num(), w.den());
}

double counting_rate(const BigRat& a) {
  const double x = a.get_d();
  if (!(a > BigRat(1, 2)) || !(a < 1))
    throw std::domain_error("counting rate needs 1/2 < a < 1");
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x) - 1.0;
}

double born_rate(const BigRat& a, const ExactProb& p) {
  const double x = a.get_d();
  const double q = p.to_double();
  if (!(a > 0) || !(a < 1)) throw std::domain_error("born rate needs 0 < a < 1");
  if (p.is_zero() || p.is_one()) throw std::domain_error("born rate needs 0 < p < 1");
  return x * std::log(x / q) + (1.0 - x) * std::log((1.0 - x) / (1.0 - q));
}

std::vector<SweepCell> sweep(std::vector<std::uint64_t> n_values, const ExactProb& p,
                             const ExactProb& epsilon, std::vector<BigRat> alphas, Mode mode,
                             MaverickRule::Cmp cmp, std::uint64_t cap) {
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  const MaverickRule rule(epsilon, cmp);
  std::vector<SweepCell> cells;
  cells.reserve(n_values.size() * alphas.size());
  for (std::uint64_t n : n_values) {
    for (const BigRat& alpha : alphas) {
      SweepCell cell;
      cell.n = n;
      cell.alpha = alpha;
      try {
        const MeasureSpec spec{alpha};
        cell.report = mode == Mode::exact ? measure_mass_streaming(n, p, spec, rule, cap)
                                          : measure_mass_asymptotic(n, p, spec, rule);
      } catch (const std::exception& ex) {
        cell.error = ex.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace branchlab::measures
