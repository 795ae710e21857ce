#pragma once

/**
 * One-parameter family of branch measures over an outcome-class ensemble,
 * interpolating the two positions usually argued about: weight each branch
 * by (squared magnitude)^alpha and normalize. alpha = 0 counts branches,
 * alpha = 1 is the standard quadratic weighting.
 *
 * A branch is "maverick" at tolerance epsilon when its plus-fraction k/n
 * deviates from the preparation weight p by more than epsilon. Exact mode
 * carries every mass as an ExactProb; asymptotic mode works on natural-log
 * scale and reaches n far beyond exact-mode reach.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "branchlab/branching.hpp"
#include "branchlab/exact.hpp"

namespace branchlab::measures {

enum class Mode { exact, asymptotic };

std::string mode_str(Mode m);
std::optional<Mode> mode_parse(const std::string& s);

/// Weighting rule u_k proportional to count(k) * (p^k (1-p)^(n-k))^alpha.
/// Exact mode requires alpha to be a non-negative integer (the weights stay
/// rational); asymptotic mode accepts any non-negative rational.
struct MeasureSpec {
  BigRat alpha;

  static MeasureSpec counting() { return MeasureSpec{BigRat(0)}; }
  static MeasureSpec born() { return MeasureSpec{BigRat(1)}; }

  bool integer_alpha() const { return alpha.get_den() == 1; }
};

/// Which classes count as maverick: |k/n - p| > epsilon (strict) or
/// >= epsilon (inclusive). Comparisons are exact rational comparisons.
struct MaverickRule {
  enum class Cmp { strict, inclusive };

  ExactProb epsilon;
  Cmp cmp = Cmp::strict;

  MaverickRule(ExactProb eps, Cmp c = Cmp::strict);
  bool is_maverick(std::uint64_t k, std::uint64_t n, const ExactProb& p) const;
};

struct MaverickReport {
  std::uint64_t n = 0;
  ExactProb p;
  ExactProb epsilon;
  BigRat alpha;
  Mode mode = Mode::exact;

  // Filled in exact mode only; the two always sum to exactly 1.
  std::optional<ExactProb> maverick_mass;
  std::optional<ExactProb> nonmaverick_mass;

  // Filled in both modes (converted from the exact values when available).
  LogReal maverick_ln;
  LogReal nonmaverick_ln;
};

/// Thrown when exact mode is asked for an n past the configured cap.
struct ExactCapExceeded : std::runtime_error {
  explicit ExactCapExceeded(std::uint64_t n, std::uint64_t cap);
};

constexpr std::uint64_t kDefaultExactCap = 20000;

/// Exact masses over a materialized ensemble.
MaverickReport measure_mass(const branching::BranchEnsemble& ensemble, const MeasureSpec& spec,
                            const MaverickRule& rule, std::uint64_t cap = kDefaultExactCap);

/// Same result as measure_mass over BranchEnsemble::build(n, p), but streams
/// the classes in O(1) memory. Preferred for large n in exact mode.
MaverickReport measure_mass_streaming(std::uint64_t n, const ExactProb& p,
                                      const MeasureSpec& spec, const MaverickRule& rule,
                                      std::uint64_t cap = kDefaultExactCap);

/// Log-scale masses; handles n up to a few million. The two ln masses
/// exponentiate to a sum of 1 up to the final rounding step.
MaverickReport measure_mass_asymptotic(std::uint64_t n, const ExactProb& p,
                                       const MeasureSpec& spec, const MaverickRule& rule);

/// Concentration ceiling 2 * exp(-2 n epsilon^2) for the deviation event,
/// on log scale. Exceeds 1 for small n; that is the bound, not a bug.
LogReal hoeffding_bound(std::uint64_t n, const ExactProb& epsilon);

/// Exact tail mass of {k/n >= a} under branch counting: sum of C(n,k)/2^n.
ExactProb counting_tail_mass(std::uint64_t n, const ExactProb& a);

/// Exact squared-magnitude mass of the single class nearest a*n.
ExactProb born_class_mass(std::uint64_t n, const ExactProb& p, const ExactProb& a);

/// Large-n decay exponent of the counting tail {k/n >= a}, in bits:
/// h2(a) - 1, negative on the open interval (1/2, 1).
double counting_rate(const BigRat& a);

/// Large-n decay exponent of the class at k = a*n under quadratic weighting,
/// in nats: the relative-entropy rate a*ln(a/p) + (1-a)*ln((1-a)/(1-p)).
double born_rate(const BigRat& a, const ExactProb& p);

struct SweepCell {
  std::uint64_t n = 0;
  BigRat alpha;
  std::optional<MaverickReport> report;  // empty on a per-cell error
  std::string error;
};

/// Full grid, rows ordered n ascending then alpha ascending (duplicates
/// dropped). A cell that fails (for instance past the exact cap) is flagged
/// in place; the rest of the sweep still runs.
std::vector<SweepCell> sweep(std::vector<std::uint64_t> n_values, const ExactProb& p,
                             const ExactProb& epsilon, std::vector<BigRat> alphas, Mode mode,
                             MaverickRule::Cmp cmp = MaverickRule::Cmp::strict,
                             std::uint64_t cap = kDefaultExactCap);

}  // namespace branchlab::measures
