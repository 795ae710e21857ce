#include "branchlab/decoherence.hpp"

#include <cmath>
#include <stdexcept>

namespace branchlab::decoherence {

namespace {

void check(const PointerModel& model) {
  if (model.n_env < 0) throw std::domain_error("environment size must be non-negative");
  if (model.gamma.has_value()) {
    if (!model.gamma->in_unit_interval()) throw std::domain_error("gamma out of range");
  } else if (!(model.gamma_value >= 0.0 && model.gamma_value <= 1.0)) {
    throw std::domain_error("gamma out of range");
  }
}

}  // namespace

PointerModel PointerModel::exact(std::int64_t n_env, ExactProb gamma) {
  PointerModel m;
  m.n_env = n_env;
  m.gamma_value = gamma.to_double();
  m.gamma = std::move(gamma);
  check(m);
  return m;
}

PointerModel PointerModel::real(std::int64_t n_env, double gamma) {
  PointerModel m;
  m.n_env = n_env;
  m.gamma_value = gamma;
  check(m);
  return m;
}

ExactProb pointer_overlap_exact(const PointerModel& model) {
  check(model);
  if (!model.gamma.has_value())
    throw std::invalid_argument("exact overlap needs a rational gamma");
  return pow_exact(*model.gamma, static_cast<std::uint64_t>(model.n_env));
}

LogReal pointer_overlap_log(const PointerModel& model) {
  check(model);
  if (model.gamma_value == 0.0)
    return model.n_env == 0 ? LogReal::from_ln(0.0) : LogReal::zero();
  return LogReal::from_ln(static_cast<double>(model.n_env) * std::log(model.gamma_value));
}

LogReal interference_visibility(const ExactProb& p_plus, const PointerModel& model) {
  check(model);
  if (!p_plus.in_unit_interval()) throw std::domain_error("p out of range");
  if (p_plus.is_zero() || p_plus.is_one()) return LogReal::zero();
  const LogReal cross = to_logreal(p_plus * p_plus.complement());
  const LogReal overlap = pointer_overlap_log(model);
  if (overlap.is_zero()) return LogReal::zero();
  return LogReal::from_ln(0.5 * cross.ln_mag + overlap.ln_mag);
}

double decoherence_rate(const PointerModel& model) {
  check(model);
  if (model.gamma_value == 0.0 || model.gamma_value == 1.0)
    throw std::domain_error("no finite rate for gamma of 0 or 1");
  return -std::log(model.gamma_value);
}

}  // namespace branchlab::decoherence
