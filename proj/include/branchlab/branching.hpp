#pragma once

/**
 * Unitary branching of a recorder entangled with a stream of two-level
 * systems. Appending one system with preparation weights (p, 1-p) maps each
 * existing branch to two successor branches whose squared magnitudes are the
 * parent's times p and 1-p; nothing is ever discarded or renormalized, so the
 * squared magnitudes keep summing to 1 exactly.
 *
 * A JointState stores its branches sparsely (zero-magnitude branches are not
 * representable) together with the list of preparations applied so far. The
 * recorded preparations are what make the evolution reversible in practice:
 * unmeasure re-runs the last step backward and verifies that the state
 * actually lies in the image of that step.
 */

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "branchlab/exact.hpp"
#include "branchlab/scalar.hpp"

namespace branchlab::branching {

enum class Spin : std::uint8_t { plus = 0, minus = 1 };

/// Outcome history of one branch, earliest system first. Orders
/// lexicographically, which fixes every iteration order downstream.
using BranchLabel = std::vector<Spin>;

std::string label_str(const BranchLabel& label);  // "+-+" style

/// One two-level preparation: outcome "+" carries squared magnitude p_plus
/// and phase phase_plus, outcome "-" the complement.
struct QubitPrep {
  ExactProb p_plus;
  PhaseRoot phase_plus;
  PhaseRoot phase_minus;

  explicit QubitPrep(ExactProb p, PhaseRoot plus = PhaseRoot::identity(),
                     PhaseRoot minus = PhaseRoot::identity());

  bool operator==(const QubitPrep& o) const = default;
};

/// Branch amplitude split into exact squared magnitude and phase.
struct Amplitude {
  ExactProb mag2;
  PhaseRoot phase;
  bool operator==(const Amplitude& o) const = default;
};

class JointState {
 public:
  using TermMap = std::map<BranchLabel, Amplitude>;

  /// Pre-measurement state: one empty-label branch of full weight.
  static JointState ready();

  /// Builds a state from explicit branches. Labels must share one length,
  /// zero-magnitude entries are dropped, and the squared magnitudes must sum
  /// to 1 exactly. `history` may be shorter than the label length when the
  /// earlier dynamics are unknown; only recorded steps can be undone.
  static JointState from_terms(TermMap terms, std::vector<QubitPrep> history = {});

  std::size_t n_measured() const { return n_measured_; }
  const TermMap& terms() const { return terms_; }
  const std::vector<QubitPrep>& history() const { return history_; }

  /// Equality of the physical state: same branch set with identical
  /// amplitudes. The recorded history is bookkeeping and not compared.
  bool operator==(const JointState& o) const {
    return n_measured_ == o.n_measured_ && terms_ == o.terms_;
  }

 private:
  std::size_t n_measured_ = 0;
  TermMap terms_;
  std::vector<QubitPrep> history_;

  friend JointState measure_one(const JointState&, const QubitPrep&);
  friend JointState unmeasure(const JointState&);
};

/// One measurement step: every branch splits per the preparation. Exact;
/// output weights sum to 1 whenever the input's did.
JointState measure_one(const JointState& state, const QubitPrep& prep);

/// Inverse of the most recent recorded measurement step. Throws
/// std::invalid_argument("state not in the image of the recorded step")
/// when the branches cannot have come from that step (wrong weight split,
/// inconsistent phases, or a missing sibling), and std::invalid_argument
/// when there is no recorded step to undo.
JointState unmeasure(const JointState& state);

/// <a|b> over the shared label space. Exact; branches absent from either
/// state contribute nothing.
ExactScalar inner_product(const JointState& a, const JointState& b);

struct ScalarPair {
  ExactScalar before;
  ExactScalar after;
};

/// Certifies one measurement step preserves the inner product: returns
/// <a|b> and <Ua|Ub> for exact comparison. States must have equal
/// n_measured ("dimension mismatch" otherwise).
ScalarPair inner_product_preserved(const JointState& a, const JointState& b,
                                   const QubitPrep& prep);

/// All branches sharing a given number of "+" outcomes, aggregated.
struct OutcomeClass {
  std::uint64_t k = 0;       // number of "+" outcomes
  BigInt count;              // branches in the class: C(n, k)
  ExactProb born_weight;     // total squared magnitude of the class
};

/// Aggregated view of n identical measurements with weight p: the n+1
/// outcome classes. Built directly from the closed forms, in O(n) big-int
/// operations; per-branch phases are irrelevant to the aggregates.
class BranchEnsemble {
 public:
  static BranchEnsemble build(std::uint64_t n, const ExactProb& p);

  std::uint64_t n() const { return n_; }
  const ExactProb& p() const { return p_; }
  const OutcomeClass& at(std::uint64_t k) const;
  const std::vector<OutcomeClass>& classes() const { return classes_; }

 private:
  std::uint64_t n_ = 0;
  ExactProb p_;
  std::vector<OutcomeClass> classes_;
};

/// CSV rendering of the outcome classes, one row per class: columns
/// k, count (decimal integer), born_weight (num/den text).
std::string ensemble_csv(const BranchEnsemble& ensemble);

}  // namespace branchlab::branching
