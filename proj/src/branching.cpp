#include "branchlab/branching.hpp"

#include <stdexcept>

#include "branchlab/csv.hpp"

namespace branchlab::branching {

std::string label_str(const BranchLabel& label) {
  std::string s;
  s.reserve(label.size());
  for (Spin b : label) s.push_back(b == Spin::plus ? '+' : '-');
  return s;
}

QubitPrep::QubitPrep(ExactProb p, PhaseRoot plus, PhaseRoot minus)
    : p_plus(std::move(p)), phase_plus(plus), phase_minus(minus) {
  if (!p_plus.in_unit_interval()) throw std::domain_error("p_plus out of range");
}

JointState JointState::ready() {
  JointState s;
  s.terms_.emplace(BranchLabel{}, Amplitude{ExactProb(1), PhaseRoot::identity()});
  return s;
}

JointState JointState::from_terms(TermMap terms, std::vector<QubitPrep> history) {
  JointState s;
  std::size_t len = 0;
  bool first = true;
  ExactProb total;
  for (auto it = terms.begin(); it != terms.end();) {
    if (first) {
      len = it->first.size();
      first = false;
    } else if (it->first.size() != len) {
      throw std::invalid_argument("branch labels differ in length");
    }
    if (it->second.mag2.is_zero()) {
      it = terms.erase(it);
      continue;
    }
    total = total + it->second.mag2;
    ++it;
  }
  if (terms.empty()) throw std::invalid_argument("state needs at least one branch");
  if (!total.is_one()) throw std::invalid_argument("squared magnitudes must sum to 1");
  if (history.size() > len) throw std::invalid_argument("more recorded steps than outcomes");
  s.n_measured_ = len;
  s.terms_ = std::move(terms);
  s.history_ = std::move(history);
  return s;
}

JointState measure_one(const JointState& state, const QubitPrep& prep) {
  JointState out;
  out.n_measured_ = state.n_measured_ + 1;
  out.history_ = state.history_;
  out.history_.push_back(prep);

  const ExactProb q = prep.p_plus.complement();
  for (const auto& [label, amp] : state.terms_) {
    if (!prep.p_plus.is_zero()) {
      BranchLabel child = label;
      child.push_back(Spin::plus);
      out.terms_.emplace(std::move(child),
                         Amplitude{amp.mag2 * prep.p_plus, amp.phase * prep.phase_plus});
    }
    if (!q.is_zero()) {
      BranchLabel child = label;
      child.push_back(Spin::minus);
      out.terms_.emplace(std::move(child),
                         Amplitude{amp.mag2 * q, amp.phase * prep.phase_minus});
    }
  }
  return out;
}

namespace {

[[noreturn]] void not_in_image() {
  throw std::invalid_argument("state not in the image of the recorded step");
}

}  // namespace

JointState unmeasure(const JointState& state) {
  if (state.history().empty())
    throw std::invalid_argument("no recorded measurement step to undo");
  if (state.n_measured() == 0) throw std::invalid_argument("nothing measured");

  const QubitPrep prep = state.history().back();
  const ExactProb q = prep.p_plus.complement();

  JointState out;
  out.n_measured_ = state.n_measured() - 1;
  out.history_.assign(state.history().begin(), state.history().end() - 1);

  // Branch labels are sorted, so the two children of a parent are adjacent.
  auto it = state.terms().begin();
  while (it != state.terms().end()) {
    BranchLabel parent = it->first;
    const Spin last = parent.back();
    parent.pop_back();

    const Amplitude* plus = nullptr;
    const Amplitude* minus = nullptr;
    if (last == Spin::plus)
      plus = &it->second;
    else
      minus = &it->second;
    ++it;
    if (it != state.terms().end() && it->first.size() == parent.size() + 1 &&
        std::equal(parent.begin(), parent.end(), it->first.begin())) {
      if (it->first.back() == Spin::minus && minus == nullptr) {
        minus = &it->second;
        ++it;
      } else if (it->first.back() == Spin::plus && plus == nullptr) {
        plus = &it->second;
        ++it;
      }
    }

    Amplitude parent_amp;
    if (prep.p_plus.is_one()) {
      if (plus == nullptr || minus != nullptr) not_in_image();
      parent_amp = Amplitude{plus->mag2, plus->phase * prep.phase_plus.inverse()};
    } else if (prep.p_plus.is_zero()) {
      if (minus == nullptr || plus != nullptr) not_in_image();
      parent_amp = Amplitude{minus->mag2, minus->phase * prep.phase_minus.inverse()};
    } else {
      if (plus == nullptr || minus == nullptr) not_in_image();
      const ExactProb mag2 = plus->mag2 + minus->mag2;
      if (!(plus->mag2 == mag2 * prep.p_plus)) not_in_image();
      const PhaseRoot phase = plus->phase * prep.phase_plus.inverse();
      if (!(minus->phase == phase * prep.phase_minus)) not_in_image();
      parent_amp = Amplitude{mag2, phase};
    }
    out.terms_.emplace(std::move(parent), parent_amp);
  }
  return out;
}

ExactScalar inner_product(const JointState& a, const JointState& b) {
  if (a.n_measured() != b.n_measured()) throw std::invalid_argument("dimension mismatch");
  ExactScalar s;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      // conj(amp_a) * amp_b = sqrt(mag2_a * mag2_b) * (phase_b / phase_a)
      s += ExactScalar::sqrt_term(ia->second.mag2 * ib->second.mag2,
                                  ib->second.phase * ia->second.phase.inverse());
      ++ia;
      ++ib;
    }
  }
  return s;
}

ScalarPair inner_product_preserved(const JointState& a, const JointState& b,
                                   const QubitPrep& prep) {
  if (a.n_measured() != b.n_measured()) throw std::invalid_argument("dimension mismatch");
  return ScalarPair{inner_product(a, b), inner_product(measure_one(a, prep), measure_one(b, prep))};
}

BranchEnsemble BranchEnsemble::build(std::uint64_t n, const ExactProb& p) {
  if (!p.in_unit_interval()) throw std::domain_error("p out of range");
  BranchEnsemble e;
  e.n_ = n;
  e.p_ = p;
  e.classes_.reserve(n + 1);

  const BigInt a = p.num();
  const BigInt b = p.den();
  const BigInt c = b - a;
  BigInt bn;
  mpz_pow_ui(bn.get_mpz_t(), b.get_mpz_t(), n);

  // count(k) via the Pascal ratio, weight numerator a^k * c^(n-k)
  // incrementally; the degenerate preparations collapse to one class.
  BigInt count(1);
  if (sgn(a) == 0 || sgn(c) == 0) {
    const std::uint64_t hot = sgn(a) == 0 ? 0 : n;
    for (std::uint64_t k = 0; k <= n; ++k) {
      e.classes_.push_back(OutcomeClass{
          k, count, k == hot ? ExactProb(1) : ExactProb()});
      count = count * BigInt(n - k) / BigInt(k + 1);
    }
    return e;
  }

  BigInt w;
  mpz_pow_ui(w.get_mpz_t(), c.get_mpz_t(), n);
  for (std::uint64_t k = 0; k <= n; ++k) {
    e.classes_.push_back(OutcomeClass{k, count, ExactProb(count * w, bn)});
    if (k < n) {
      count = count * BigInt(n - k) / BigInt(k + 1);
      w *= a;
      mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), c.get_mpz_t());
    }
  }
  return e;
}

const OutcomeClass& BranchEnsemble::at(std::uint64_t k) const {
  if (k >= classes_.size()) throw std::out_of_range("outcome class out of range");
  return classes_[k];
}

std::string ensemble_csv(const BranchEnsemble& ensemble) {
  csv::Table t;
  t.columns = {"k", "count", "born_weight"};
  t.rows.reserve(ensemble.classes().size());
  for (const OutcomeClass& cls : ensemble.classes()) {
    t.rows.push_back({std::to_string(cls.k), cls.count.get_str(), cls.born_weight.str()});
  }
  return csv::emit(t);
}

}  // namespace branchlab::branching
