#include "branchlab/envariance.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace branchlab::envariance {

SchmidtState SchmidtState::from_terms(std::vector<SchmidtTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("state needs at least one term");
  std::sort(terms.begin(), terms.end(),
            [](const SchmidtTerm& a, const SchmidtTerm& b) { return a.sys < b.sys; });
  ExactProb total;
  std::vector<std::int64_t> envs;
  envs.reserve(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t > 0 && terms[t].sys == terms[t - 1].sys)
      throw std::invalid_argument("duplicate system index");
    if (terms[t].mag2.is_zero()) throw std::invalid_argument("zero-magnitude term");
    total = total + terms[t].mag2;
    envs.push_back(terms[t].env);
  }
  std::sort(envs.begin(), envs.end());
  if (std::adjacent_find(envs.begin(), envs.end()) != envs.end())
    throw std::invalid_argument("duplicate environment index");
  if (!total.is_one()) throw std::invalid_argument("squared magnitudes must sum to 1");
  SchmidtState s;
  s.terms_ = std::move(terms);
  return s;
}

namespace {

std::vector<SchmidtTerm>::const_iterator find_sys(const std::vector<SchmidtTerm>& terms,
                                                  std::int64_t sys) {
  auto it = std::lower_bound(terms.begin(), terms.end(), sys,
                             [](const SchmidtTerm& t, std::int64_t s) { return t.sys < s; });
  return (it != terms.end() && it->sys == sys) ? it : terms.end();
}

void check_pair(const SchmidtState& state, const SwapPair& pair) {
  if (pair.i == pair.j) throw std::invalid_argument("swap pair must name two distinct indices");
  if (!state.has_sys(pair.i) || !state.has_sys(pair.j))
    throw std::invalid_argument("swap pair names an unknown system index");
}

}  // namespace

const SchmidtTerm& SchmidtState::by_sys(std::int64_t sys) const {
  const auto it = find_sys(terms_, sys);
  if (it == terms_.end()) throw std::invalid_argument("unknown system index");
  return *it;
}

bool SchmidtState::has_sys(std::int64_t sys) const {
  return find_sys(terms_, sys) != terms_.end();
}

SchmidtState apply_swap(const SchmidtState& state, const SwapPair& pair) {
  check_pair(state, pair);
  std::vector<SchmidtTerm> terms = state.terms();
  for (SchmidtTerm& t : terms) {
    if (t.sys == pair.i)
      t.sys = pair.j;
    else if (t.sys == pair.j)
      t.sys = pair.i;
  }
  return SchmidtState::from_terms(std::move(terms));
}

SchmidtState counter_swap(const SchmidtState& state, const SwapPair& pair) {
  check_pair(state, pair);
  // Solved phase: phase(i) / phase(j) of this state. Right after a bare
  // swap of (i, j) that equals the pre-swap phase(j) / phase(i).
  const PhaseRoot phi = pair.phase_adjust.has_value()
                            ? *pair.phase_adjust
                            : state.by_sys(pair.i).phase * state.by_sys(pair.j).phase.inverse();
  const std::int64_t env_a = state.by_sys(pair.j).env;
  const std::int64_t env_b = state.by_sys(pair.i).env;

  std::vector<SchmidtTerm> terms = state.terms();
  for (SchmidtTerm& t : terms) {
    if (t.env == env_a) {
      t.env = env_b;
      t.phase = t.phase * phi;
    } else if (t.env == env_b) {
      t.env = env_a;
      t.phase = t.phase * phi.inverse();
    }
  }
  return SchmidtState::from_terms(std::move(terms));
}

EnvarianceCheck is_envariant(const SchmidtState& state, const SwapPair& pair) {
  check_pair(state, pair);
  EnvarianceCheck check;
  check.i = pair.i;
  check.j = pair.j;
  check.counter_phase =
      pair.phase_adjust.has_value()
          ? *pair.phase_adjust
          : state.by_sys(pair.j).phase * state.by_sys(pair.i).phase.inverse();

  const SchmidtState restored =
      counter_swap(apply_swap(state, pair), SwapPair{pair.i, pair.j, check.counter_phase});

  // Same system set by construction; compare term by term up to one global
  // phase fixed by the first term.
  check.global_phase =
      restored.terms().front().phase * state.terms().front().phase.inverse();
  for (std::size_t t = 0; t < state.size(); ++t) {
    const SchmidtTerm& orig = state.terms()[t];
    const SchmidtTerm& got = restored.terms()[t];
    if (!(got.mag2 == orig.mag2) || got.env != orig.env)
      check.mismatches.push_back(TermMismatch{orig.sys, "mag2"});
    else if (!(got.phase == orig.phase * check.global_phase))
      check.mismatches.push_back(TermMismatch{orig.sys, "phase"});
  }
  check.envariant = check.mismatches.empty();
  return check;
}

FineGrained fine_grain(const SchmidtState& state, std::uint64_t max_cells) {
  BigInt lcm(1);
  for (const SchmidtTerm& t : state.terms())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), t.mag2.den().get_mpz_t());
  if (!lcm.fits_ulong_p() || lcm.get_ui() > max_cells)
    throw std::runtime_error("fine-graining needs " + lcm.get_str() +
                             " cells, past the cap of " + std::to_string(max_cells) +
                             "; raise --cap");
  const std::uint64_t cells = lcm.get_ui();

  FineGrained out;
  out.cell_mass = ExactProb(BigInt(1), lcm);
  std::vector<SchmidtTerm> fine;
  fine.reserve(cells);
  std::int64_t cell = 0;
  for (const SchmidtTerm& t : state.terms()) {
    const BigInt share = t.mag2.num() * (lcm / t.mag2.den());
    for (BigInt c = 0; c < share; ++c) {
      fine.push_back(SchmidtTerm{cell, cell, out.cell_mass, t.phase});
      out.cell_owner.push_back(t.sys);
      ++cell;
    }
  }
  out.state = SchmidtState::from_terms(std::move(fine));
  return out;
}

EqualAmplitudeResult equal_amplitude_probabilities(const SchmidtState& state) {
  const ExactProb& first = state.terms().front().mag2;
  for (const SchmidtTerm& t : state.terms())
    if (!(t.mag2 == first))
      throw std::invalid_argument("magnitudes are not all equal; fine-grain first");

  EqualAmplitudeResult result;
  const std::size_t d = state.size();
  result.probabilities.assign(d, ExactProb(1, static_cast<long>(d)));
  result.checks.reserve(d > 0 ? d - 1 : 0);
  for (std::size_t t = 0; t + 1 < d; ++t) {
    const SwapPair pair{state.terms()[t].sys, state.terms()[t + 1].sys, std::nullopt};
    result.checks.push_back(is_envariant(state, pair));
    if (!result.checks.back().envariant)
      throw std::logic_error("equal-magnitude pair failed its swap check");
  }
  return result;
}

std::string render_certificate(const SchmidtState& coarse, const FineGrained& fine,
                               const EqualAmplitudeResult& result) {
  std::ostringstream out;
  out << "equal-amplitude certificate v1\n";
  out << "outcomes " << coarse.size() << "\n";
  for (std::size_t t = 0; t < coarse.size(); ++t) {
    const SchmidtTerm& term = coarse.terms()[t];
    out << "outcome " << term.sys << " mag2 " << term.mag2.str() << " phase "
        << term.phase.str() << "\n";
  }
  out << "cells " << fine.cell_owner.size() << "\n";
  for (std::size_t c = 0; c < fine.cell_owner.size(); ++c)
    out << "cell " << c << " owner " << fine.cell_owner[c] << "\n";
  for (const EnvarianceCheck& check : result.checks)
    out << "swap " << check.i << " " << check.j << " counter_phase "
        << check.counter_phase.str() << " global_phase " << check.global_phase.str()
        << (check.envariant ? " ok" : " FAILED") << "\n";

  std::string summary = "(";
  for (std::size_t t = 0; t < coarse.size(); ++t) {
    const SchmidtTerm& term = coarse.terms()[t];
    BigInt count(0);
    for (std::int64_t owner : fine.cell_owner)
      if (owner == term.sys) ++count;
    const ExactProb prob(count, BigInt(fine.cell_owner.size()));
    out << "probability " << term.sys << " " << prob.str() << "\n";
    if (t > 0) summary += ", ";
    summary += prob.str();
  }
  summary += ")";
  out << summary << "\n";
  return out.str();
}

BornDerivation derive_two_outcome_weights(const branching::QubitPrep& prep,
                                          std::uint64_t max_cells) {
  if (prep.p_plus.is_zero() || prep.p_plus.is_one())
    throw std::domain_error("two-outcome derivation needs 0 < p < 1");

  // Post-measurement joint state, then the perfectly correlated view: the
  // recorder holds the outcome, the environment copy mirrors it.
  const branching::JointState joint =
      branching::measure_one(branching::JointState::ready(), prep);
  std::vector<SchmidtTerm> terms;
  std::int64_t index = 0;
  for (const auto& [label, amp] : joint.terms()) {
    terms.push_back(SchmidtTerm{index, index, amp.mag2, amp.phase});
    ++index;
  }
  const SchmidtState coarse = SchmidtState::from_terms(std::move(terms));

  const FineGrained fine = fine_grain(coarse, max_cells);
  const EqualAmplitudeResult equal = equal_amplitude_probabilities(fine.state);

  BornDerivation out;
  BigInt plus_cells(0);
  for (std::int64_t owner : fine.cell_owner)
    if (owner == 0) ++plus_cells;
  const BigInt total(fine.cell_owner.size());
  out.p_plus = ExactProb(plus_cells, total);
  out.p_minus = ExactProb(total - plus_cells, total);
  out.certificate = render_certificate(coarse, fine, equal);
  return out;
}

namespace {

struct CertParser {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  std::vector<std::string>* problems;

  CertParser(const std::string& text, std::vector<std::string>& probs) : problems(&probs) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ls >> tok) tokens.push_back(tok);
      lines.push_back(std::move(tokens));
    }
  }

  bool done() const { return pos >= lines.size(); }
  const std::vector<std::string>& peek() const { return lines[pos]; }
  void advance() { ++pos; }
  void problem(const std::string& what) { problems->push_back(what); }
};

}  // namespace

VerifyResult verify_certificate(const std::string& text) {
  VerifyResult result;
  CertParser p(text, result.problems);

  try {
    if (p.done() || p.peek() != std::vector<std::string>{"equal-amplitude", "certificate", "v1"}) {
      p.problem("missing or wrong header line");
      return result;
    }
    p.advance();

    if (p.done() || p.peek().size() != 2 || p.peek()[0] != "outcomes") {
      p.problem("missing outcomes line");
      return result;
    }
    const std::size_t n_outcomes = std::stoul(p.peek()[1]);
    p.advance();

    struct Outcome {
      std::int64_t sys;
      ExactProb mag2;
      PhaseRoot phase;
    };
    std::vector<Outcome> outcomes;
    ExactProb outcome_total;
    for (std::size_t t = 0; t < n_outcomes; ++t) {
      if (p.done() || p.peek().size() != 6 || p.peek()[0] != "outcome" || p.peek()[2] != "mag2" ||
          p.peek()[4] != "phase") {
        p.problem("malformed outcome line");
        return result;
      }
      outcomes.push_back(Outcome{std::stoll(p.peek()[1]), ExactProb::parse(p.peek()[3]),
                                 PhaseRoot::parse(p.peek()[5])});
      outcome_total = outcome_total + outcomes.back().mag2;
      p.advance();
    }
    if (!outcome_total.is_one()) p.problem("outcome magnitudes do not sum to 1");

    if (p.done() || p.peek().size() != 2 || p.peek()[0] != "cells") {
      p.problem("missing cells line");
      return result;
    }
    const std::size_t n_cells = std::stoul(p.peek()[1]);
    p.advance();

    std::vector<std::int64_t> owner(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
      if (p.done() || p.peek().size() != 4 || p.peek()[0] != "cell" || p.peek()[2] != "owner" ||
          std::stoul(p.peek()[1]) != c) {
        p.problem("malformed cell line");
        return result;
      }
      owner[c] = std::stoll(p.peek()[3]);
      p.advance();
    }

    // Reconstruct the fine-grained state and check mass conservation.
    const ExactProb cell_mass(BigInt(1), BigInt(n_cells));
    std::vector<SchmidtTerm> fine;
    for (std::size_t c = 0; c < n_cells; ++c) {
      const auto it = std::find_if(outcomes.begin(), outcomes.end(),
                                   [&](const Outcome& o) { return o.sys == owner[c]; });
      if (it == outcomes.end()) {
        p.problem("cell " + std::to_string(c) + " owned by an unknown outcome");
        return result;
      }
      fine.push_back(SchmidtTerm{static_cast<std::int64_t>(c), static_cast<std::int64_t>(c),
                                 cell_mass, it->phase});
    }
    const SchmidtState fine_state = SchmidtState::from_terms(std::move(fine));
    for (const Outcome& o : outcomes) {
      BigInt count(0);
      for (std::int64_t w : owner)
        if (w == o.sys) ++count;
      if (!(ExactProb(count, BigInt(n_cells)) == o.mag2))
        p.problem("outcome " + std::to_string(o.sys) + " cell mass differs from its magnitude");
    }

    // Re-execute every swap line; the chain must cover all adjacent pairs.
    std::size_t expected = 0;
    while (!p.done() && !p.peek().empty() && p.peek()[0] == "swap") {
      const auto& toks = p.peek();
      if (toks.size() != 8 || toks[3] != "counter_phase" || toks[5] != "global_phase") {
        p.problem("malformed swap line");
        return result;
      }
      const std::int64_t i = std::stoll(toks[1]);
      const std::int64_t j = std::stoll(toks[2]);
      if (expected + 1 >= n_cells || i != static_cast<std::int64_t>(expected) ||
          j != static_cast<std::int64_t>(expected) + 1)
        p.problem("swap chain out of order at pair " + toks[1] + "," + toks[2]);
      const PhaseRoot counter = PhaseRoot::parse(toks[4]);
      const PhaseRoot global = PhaseRoot::parse(toks[6]);
      const EnvarianceCheck check = is_envariant(fine_state, SwapPair{i, j, counter});
      if (!check.envariant)
        p.problem("swap " + toks[1] + "," + toks[2] + " does not restore the state");
      else if (!(check.global_phase == global))
        p.problem("swap " + toks[1] + "," + toks[2] + " global phase differs");
      if (toks[7] != "ok") p.problem("swap " + toks[1] + "," + toks[2] + " not marked ok");
      ++expected;
      p.advance();
    }
    if (expected + 1 != n_cells && !(n_cells == 1 && expected == 0))
      p.problem("swap chain does not cover all adjacent cell pairs");

    std::vector<ExactProb> stated;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      if (p.done() || p.peek().size() != 3 || p.peek()[0] != "probability") {
        p.problem("missing probability line");
        return result;
      }
      if (std::stoll(p.peek()[1]) != outcomes[t].sys) p.problem("probability line out of order");
      stated.push_back(ExactProb::parse(p.peek()[2]));
      BigInt count(0);
      for (std::int64_t w : owner)
        if (w == outcomes[t].sys) ++count;
      if (!(stated.back() == ExactProb(count, BigInt(n_cells))))
        p.problem("probability of outcome " + std::to_string(outcomes[t].sys) +
                  " differs from its cell share");
      p.advance();
    }

    std::string summary = "(";
    for (std::size_t t = 0; t < stated.size(); ++t) {
      if (t > 0) summary += ", ";
      summary += stated[t].str();
    }
    summary += ")";
    std::vector<std::string> summary_tokens;
    {
      std::istringstream ss(summary);
      std::string tok;
      while (ss >> tok) summary_tokens.push_back(tok);
    }
    if (p.done() || p.peek() != summary_tokens) {
      p.problem("summary line differs from the probability lines");
      return result;
    }
    p.advance();
    if (!p.done()) p.problem("trailing content after the summary line");
  } catch (const std::exception& ex) {
    p.problem(std::string("parse failure: ") + ex.what());
  }

  result.ok = result.problems.empty();
  return result;
}

}  // namespace branchlab::envariance
