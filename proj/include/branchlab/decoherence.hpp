#pragma once

/**
 * Pointer-state overlap model: two macroscopically distinct records imprint
 * on n_env independent environment degrees, each contributing a per-degree
 * overlap factor gamma. The total overlap gamma^n_env is what suppresses
 * any interference between the records; it falls exponentially in n_env.
 */

#include <cstdint>
#include <optional>

#include "branchlab/exact.hpp"

namespace branchlab::decoherence {

struct PointerModel {
  std::int64_t n_env = 0;
  /// Per-degree overlap in [0, 1]. Exact when constructed from a rational;
  /// a real-valued model supports only the log-scale operations.
  std::optional<ExactProb> gamma;
  double gamma_value = 0.0;

  static PointerModel exact(std::int64_t n_env, ExactProb gamma);
  static PointerModel real(std::int64_t n_env, double gamma);
};

/// gamma^n_env as an exact rational. Requires a rational-gamma model.
ExactProb pointer_overlap_exact(const PointerModel& model);

/// gamma^n_env on log scale: ln = n_env * ln(gamma). Exactly log-linear in
/// n_env by construction.
LogReal pointer_overlap_log(const PointerModel& model);

/// Magnitude of the cross term between records of weight p and 1-p:
/// sqrt(p(1-p)) * gamma^n_env, on log scale. Zero (sign 0) when either
/// record carries no weight.
LogReal interference_visibility(const ExactProb& p_plus, const PointerModel& model);

/// Per-degree suppression exponent -ln(gamma). Errors on gamma in {0, 1},
/// where no finite rate describes the decay.
double decoherence_rate(const PointerModel& model);

}  // namespace branchlab::decoherence
