#pragma once

/**
 * Brute-force reference path: walk all 2^n branch histories one by one,
 * multiply per-outcome weights directly, and tally. Deliberately shares no
 * code with the aggregated ensemble construction; the self-test compares
 * the two paths for exact agreement.
 */

#include <cstdint>
#include <vector>

#include "branchlab/branching.hpp"
#include "branchlab/exact.hpp"
#include "branchlab/measures.hpp"

namespace branchlab::oracle {

struct Enumeration {
  std::uint64_t n = 0;
  ExactProb p;
  std::vector<BigInt> class_count;       // tallied branch counts, by plus count
  std::vector<BigInt> class_weight_num;  // summed weight numerators, by plus count
  BigInt weight_den;                     // common denominator den(p)^n
};

/// Enumerates all 2^n branches. Guarded at n <= 26 to keep runtime sane.
Enumeration enumerate_branches(std::uint64_t n, const ExactProb& p);

ExactProb class_weight(const Enumeration& e, std::uint64_t k);

/// Maverick mass under branch counting / quadratic weighting, straight from
/// the tallies.
ExactProb counting_maverick(const Enumeration& e, const measures::MaverickRule& rule);
ExactProb born_maverick(const Enumeration& e, const measures::MaverickRule& rule);

/// Exact comparison of an enumeration against an aggregated ensemble.
bool matches_ensemble(const Enumeration& e, const branching::BranchEnsemble& ensemble);

}  // namespace branchlab::oracle
