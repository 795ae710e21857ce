#include "branchlab/oracle.hpp"

#include <stdexcept>

namespace branchlab::oracle {

Enumeration enumerate_branches(std::uint64_t n, const ExactProb& p) {
  if (n == 0 || n > 26) throw std::domain_error("enumeration covers 1 <= n <= 26");
  if (!p.in_unit_interval()) throw std::domain_error("p out of range");

  Enumeration e;
  e.n = n;
  e.p = p;
  e.class_count.assign(n + 1, BigInt(0));
  e.class_weight_num.assign(n + 1, BigInt(0));
  mpz_pow_ui(e.weight_den.get_mpz_t(), p.den().get_mpz_t(), n);

  const BigInt a = p.num();
  const BigInt c = p.den() - a;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    BigInt w(1);
    std::uint64_t plus = 0;
    for (std::uint64_t bit = 0; bit < n; ++bit) {
      if (mask & (std::uint64_t(1) << bit)) {
        w *= a;
        ++plus;
      } else {
        w *= c;
      }
    }
    e.class_count[plus] += 1;
    e.class_weight_num[plus] += w;
  }
  return e;
}

ExactProb class_weight(const Enumeration& e, std::uint64_t k) {
  return ExactProb(e.class_weight_num.at(k), e.weight_den);
}

namespace {

template <typename NumOf>
ExactProb tally(const Enumeration& e, const measures::MaverickRule& rule, NumOf&& num_of,
                const BigInt& total) {
  BigInt mav(0);
  for (std::uint64_t k = 0; k <= e.n; ++k)
    if (rule.is_maverick(k, e.n, e.p)) mav += num_of(k);
  return ExactProb(mav, total);
}

}  // namespace

ExactProb counting_maverick(const Enumeration& e, const measures::MaverickRule& rule) {
  BigInt total(0);
  for (const BigInt& c : e.class_count) total += c;
  return tally(e, rule, [&](std::uint64_t k) { return e.class_count[k]; }, total);
}

ExactProb born_maverick(const Enumeration& e, const measures::MaverickRule& rule) {
  return tally(e, rule, [&](std::uint64_t k) { return e.class_weight_num[k]; }, e.weight_den);
}

bool matches_ensemble(const Enumeration& e, const branching::BranchEnsemble& ensemble) {
  if (ensemble.n() != e.n || !(ensemble.p() == e.p)) return false;
  for (std::uint64_t k = 0; k <= e.n; ++k) {
    const branching::OutcomeClass& cls = ensemble.at(k);
    if (cls.count != e.class_count[k]) return false;
    if (!(cls.born_weight == class_weight(e, k))) return false;
  }
  return true;
}

}  // namespace branchlab::oracle
