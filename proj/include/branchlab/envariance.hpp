#pragma once

/**
 * Swap symmetry of perfectly correlated system-environment states, and the
 * probability assignment it forces on equal-magnitude branches.
 *
 * A SchmidtState is a sum of perfectly correlated terms
 *     sum_t  c_t |sys_t> |env_t>
 * with distinct system indices and distinct environment indices, and each
 * c_t carried as an exact squared magnitude plus a root-of-unity phase.
 *
 * Conventions, fixed here and relied on by the certificate format:
 *  - apply_swap exchanges the two system indices of a pair outright; the
 *    amplitudes ride along unchanged. The swap is its own inverse.
 *  - counter_swap acts on the environment side. With e_a the environment
 *    partner of sys j and e_b the partner of sys i, it maps
 *        |e_a> -> phi |e_b>,   |e_b> -> phi^(-1) |e_a>
 *    where phi is the pair's phase_adjust. When phase_adjust is not given
 *    it is solved from the state as phase(j) / phase(i), the unique choice
 *    that undoes a bare swap of equal-magnitude terms exactly.
 *  - is_envariant performs swap then counter-swap mechanically and compares
 *    the result with the input up to one global phase, which it reports.
 *
 * Certificates are line-oriented text. verify_certificate re-parses one and
 * re-executes every recorded check from scratch; it shares no state with the
 * emitting path beyond the operations above.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "branchlab/branching.hpp"
#include "branchlab/exact.hpp"

namespace branchlab::envariance {

struct SchmidtTerm {
  std::int64_t sys = 0;
  std::int64_t env = 0;
  ExactProb mag2;
  PhaseRoot phase;
  bool operator==(const SchmidtTerm& o) const = default;
};

class SchmidtState {
 public:
  /// Terms are stored sorted by system index. System indices must be
  /// distinct, environment indices must be distinct, zero-magnitude terms
  /// are rejected, and the squared magnitudes must sum to 1.
  static SchmidtState from_terms(std::vector<SchmidtTerm> terms);

  const std::vector<SchmidtTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const SchmidtTerm& by_sys(std::int64_t sys) const;
  bool has_sys(std::int64_t sys) const;

  bool operator==(const SchmidtState& o) const { return terms_ == o.terms_; }

 private:
  std::vector<SchmidtTerm> terms_;
};

struct SwapPair {
  std::int64_t i = 0;
  std::int64_t j = 0;
  /// Phase applied by the counter-swap; solved from the state when absent.
  std::optional<PhaseRoot> phase_adjust;
};

/// Exchange of system indices i and j. Throws on i == j or an index that is
/// not present in the state.
SchmidtState apply_swap(const SchmidtState& state, const SwapPair& pair);

/// Environment-side exchange described above. Same index requirements.
SchmidtState counter_swap(const SchmidtState& state, const SwapPair& pair);

struct TermMismatch {
  std::int64_t sys = 0;
  std::string what;  // "mag2" or "phase"
};

struct EnvarianceCheck {
  bool envariant = false;
  std::int64_t i = 0, j = 0;
  PhaseRoot counter_phase;  // the phase the counter-swap actually used
  PhaseRoot global_phase;   // restored state = global_phase * original
  std::vector<TermMismatch> mismatches;  // witness when not envariant
};

/// Mechanically applies swap and counter-swap and compares against the
/// input up to a single global phase.
EnvarianceCheck is_envariant(const SchmidtState& state, const SwapPair& pair);

struct FineGrained {
  SchmidtState state;                    // uniform cells, mag2 = 1/cells each
  std::vector<std::int64_t> cell_owner;  // cell index -> original system index
  ExactProb cell_mass;
};

/// Splits every term into equal-magnitude cells over the least common
/// denominator of the squared magnitudes. Cell phases inherit the owner's
/// phase; total mass per owner is conserved exactly.
FineGrained fine_grain(const SchmidtState& state, std::uint64_t max_cells = 20000);

struct EqualAmplitudeResult {
  std::vector<ExactProb> probabilities;   // per term, in system-index order
  std::vector<EnvarianceCheck> checks;    // adjacent-pair swap checks
};

/// For a state whose terms all carry the same squared magnitude: certifies
/// pairwise exchangeability via adjacent-pair swap checks and returns the
/// forced uniform assignment. Throws when magnitudes differ.
EqualAmplitudeResult equal_amplitude_probabilities(const SchmidtState& state);

struct BornDerivation {
  ExactProb p_plus;                       // recovered weight of outcome 0
  ExactProb p_minus;                      // recovered weight of outcome 1
  std::string certificate;                // full text, re-verifiable
};

/// End-to-end derivation for a two-outcome preparation: model the recorder
/// and environment after one measurement, fine-grain to equal cells, run the
/// swap checks, and recombine. Requires 0 < p < 1.
BornDerivation derive_two_outcome_weights(const branching::QubitPrep& prep,
                                          std::uint64_t max_cells = 20000);

/// Renders the fine-graining and swap checks behind an equal-amplitude
/// derivation as a text certificate.
std::string render_certificate(const SchmidtState& coarse, const FineGrained& fine,
                               const EqualAmplitudeResult& result);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> problems;
};

/// Parses a certificate and re-runs every recorded check from first
/// principles: reconstructs the fine-grained state, re-executes each swap
/// line, recomputes the probabilities, and re-checks the summary line.
VerifyResult verify_certificate(const std::string& text);

}  // namespace branchlab::envariance
