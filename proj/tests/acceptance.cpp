// Acceptance gate: seven end-to-end checks, each with a hard runtime budget.
// Prints one [PASS]/[FAIL] line per criterion; the exit code is the number
// of failed criteria, so 0 means the build is good.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "branchlab/branching.hpp"
#include "branchlab/decoherence.hpp"
#include "branchlab/envariance.hpp"
#include "branchlab/harness.hpp"
#include "branchlab/measures.hpp"
#include "branchlab/oracle.hpp"

using namespace branchlab;

namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool ok = false;
  std::string detail;
};

// Criterion 1: the aggregated ensemble and both measures agree exactly with
// brute-force enumeration of all 2^n branch histories.
Outcome oracle_equivalence() {
  const std::vector<ExactProb> ps = {ExactProb(1, 2), ExactProb(2, 3), ExactProb(9, 10)};
  const std::vector<ExactProb> epsilons = {ExactProb(1, 10), ExactProb(1, 4)};
  std::uint64_t cells = 0;
  for (std::uint64_t n = 1; n <= 12; ++n) {
    for (const ExactProb& p : ps) {
      const oracle::Enumeration enumerated = oracle::enumerate_branches(n, p);
      const branching::BranchEnsemble ensemble = branching::BranchEnsemble::build(n, p);
      if (!oracle::matches_ensemble(enumerated, ensemble))
        return {false, "ensemble mismatch at n=" + std::to_string(n) + " p=" + p.str()};
      for (const ExactProb& eps : epsilons) {
        const measures::MaverickRule rule(eps);
        const auto counting =
            measures::measure_mass(ensemble, measures::MeasureSpec::counting(), rule);
        const auto born = measures::measure_mass(ensemble, measures::MeasureSpec::born(), rule);
        if (!(*counting.maverick_mass == oracle::counting_maverick(enumerated, rule)) ||
            !(*born.maverick_mass == oracle::born_maverick(enumerated, rule)))
          return {false, "mass mismatch at n=" + std::to_string(n) + " p=" + p.str() +
                             " eps=" + eps.str()};
        ++cells;
      }
    }
  }
  // spot checks beyond the grid
  for (std::uint64_t n : {16, 20}) {
    const ExactProb p(9, 10);
    const oracle::Enumeration enumerated = oracle::enumerate_branches(n, p);
    const branching::BranchEnsemble ensemble = branching::BranchEnsemble::build(n, p);
    if (!oracle::matches_ensemble(enumerated, ensemble))
      return {false, "ensemble mismatch at n=" + std::to_string(n)};
    const measures::MaverickRule rule(ExactProb(1, 10));
    const auto counting =
        measures::measure_mass(ensemble, measures::MeasureSpec::counting(), rule);
    const auto born = measures::measure_mass(ensemble, measures::MeasureSpec::born(), rule);
    if (!(*counting.maverick_mass == oracle::counting_maverick(enumerated, rule)) ||
        !(*born.maverick_mass == oracle::born_maverick(enumerated, rule)))
      return {false, "mass mismatch at n=" + std::to_string(n)};
    ++cells;
  }
  return {true, std::to_string(cells) + " grid cells exact-equal"};
}

// Criterion 2: at n=100, p=9/10, eps=1/5 the counting measure hands almost
// all mass to deviant branches while the quadratic measure keeps it under
// the concentration bound 2 exp(-8).
Outcome measure_divergence() {
  const measures::MaverickRule rule(ExactProb(1, 5));
  const auto counting =
      measures::measure_mass_streaming(100, ExactProb(9, 10), measures::MeasureSpec::counting(), rule);
  const auto born =
      measures::measure_mass_streaming(100, ExactProb(9, 10), measures::MeasureSpec::born(), rule);
  if (!(*counting.maverick_mass > ExactProb(999, 1000)))
    return {false, "counting maverick mass " + counting.maverick_mass->str() + " <= 999/1000"};
  const double bound_ln = std::log(2.0) - 8.0;
  if (!(born.maverick_ln.ln_mag < bound_ln))
    return {false, "quadratic maverick mass misses the 2exp(-8) bound"};
  std::ostringstream d;
  d << "counting " << format_fixed_sig(counting.maverick_mass->to_double(), 6) << ", quadratic "
    << format_fixed_sig(born.maverick_ln.to_double(), 6) << " < " << format_fixed_sig(std::exp(bound_ln), 6);
  return {true, d.str()};
}

// Criterion 3: finite-n decay matches the analytic exponents at n=2000,
// within 0.01 bits (counting tail past 7/10) and 0.02 nats (quadratic class
// at 7/10 when p=9/10).
Outcome rate_convergence() {
  const std::uint64_t n = 2000;
  const ExactProb tail = measures::counting_tail_mass(n, ExactProb(7, 10));
  const double emp_bits = -to_logreal(tail).ln_mag / (static_cast<double>(n) * M_LN2);
  const double want_bits = 0.118709100769307382;  // 1 - h2(7/10)
  if (std::fabs(emp_bits - want_bits) >= 0.01)
    return {false, "counting rate " + format_fixed_sig(emp_bits) + " not within 0.01 of " +
                       format_fixed_sig(want_bits)};

  const ExactProb cls = measures::born_class_mass(n, ExactProb(9, 10), ExactProb(7, 10));
  const double emp_nats = -to_logreal(cls).ln_mag / static_cast<double>(n);
  const double want_nats = 0.153663586803798653;  // relative entropy of 7/10 vs 9/10
  if (std::fabs(emp_nats - want_nats) >= 0.02)
    return {false, "quadratic rate " + format_fixed_sig(emp_nats) + " not within 0.02 of " +
                       format_fixed_sig(want_nats)};
  std::ostringstream d;
  d << "counting " << format_fixed_sig(emp_bits, 6) << " vs " << format_fixed_sig(want_bits, 6)
    << " bits, quadratic " << format_fixed_sig(emp_nats, 6) << " vs "
    << format_fixed_sig(want_nats, 6) << " nats";
  return {true, d.str()};
}

// Criterion 4: a measurement step is exactly reversible and exactly an
// isometry, over 1000 randomized states.
Outcome reversibility() {
  std::mt19937_64 rng(20240901);
  const auto random_prep = [&rng] {
    std::uniform_int_distribution<long> den(2, 24);
    const long b = den(rng);
    std::uniform_int_distribution<long> num(1, b - 1);
    std::uniform_int_distribution<std::int64_t> ord(1, 8);
    const std::int64_t l1 = ord(rng), l2 = ord(rng);
    std::uniform_int_distribution<std::int64_t> k1(0, l1 - 1), k2(0, l2 - 1);
    return branching::QubitPrep(ExactProb(num(rng), b), PhaseRoot(k1(rng), l1),
                                PhaseRoot(k2(rng), l2));
  };
  for (int trial = 0; trial < 1000; ++trial) {
    branching::JointState a = branching::JointState::ready();
    branching::JointState b = branching::JointState::ready();
    const int steps = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < steps; ++i) {
      a = branching::measure_one(a, random_prep());
      b = branching::measure_one(b, random_prep());
    }
    const branching::QubitPrep next = random_prep();
    if (!(branching::unmeasure(branching::measure_one(a, next)) == a))
      return {false, "round trip failed on trial " + std::to_string(trial)};
    const branching::ScalarPair pair = branching::inner_product_preserved(a, b, next);
    if (!(pair.before == pair.after))
      return {false, "inner product changed on trial " + std::to_string(trial)};
  }
  return {true, "1000 round trips and isometry checks exact"};
}

// Criterion 5: the swap-symmetry derivation recovers every two-outcome
// preparation weight exactly, and its certificate re-verifies from scratch.
Outcome weight_recovery() {
  std::mt19937_64 rng(20240902);
  for (int trial = 0; trial < 50; ++trial) {
    const long den = 2 + static_cast<long>(rng() % 199);
    const long num = 1 + static_cast<long>(rng() % (den - 1));
    std::uniform_int_distribution<std::int64_t> ord(1, 10);
    const std::int64_t l1 = ord(rng), l2 = ord(rng);
    std::uniform_int_distribution<std::int64_t> k1(0, l1 - 1), k2(0, l2 - 1);
    const branching::QubitPrep prep(ExactProb(num, den), PhaseRoot(k1(rng), l1),
                                    PhaseRoot(k2(rng), l2));
    const envariance::BornDerivation d = envariance::derive_two_outcome_weights(prep);
    if (!(d.p_plus == prep.p_plus) || !(d.p_minus == prep.p_plus.complement()))
      return {false, "recovered (" + d.p_plus.str() + ", " + d.p_minus.str() +
                         ") for p = " + prep.p_plus.str()};
    const envariance::VerifyResult v = envariance::verify_certificate(d.certificate);
    if (!v.ok)
      return {false, "certificate for p = " + prep.p_plus.str() + " failed: " +
                         (v.problems.empty() ? "unknown" : v.problems.front())};
  }
  return {true, "50 random preparations recovered exactly, certificates verified"};
}

// Criterion 6: record overlap composes multiplicatively over environment
// blocks (exact) and is log-linear in the environment size (to 1e-9).
Outcome overlap_scaling() {
  std::mt19937_64 rng(20240903);
  for (int trial = 0; trial < 40; ++trial) {
    const long den = 2 + static_cast<long>(rng() % 19);
    const ExactProb g(1 + static_cast<long>(rng() % (den - 1)), den);
    const std::int64_t n1 = static_cast<std::int64_t>(rng() % 501);
    const std::int64_t n2 = static_cast<std::int64_t>(rng() % 501);
    const ExactProb joined =
        decoherence::pointer_overlap_exact(decoherence::PointerModel::exact(n1 + n2, g));
    const ExactProb split =
        decoherence::pointer_overlap_exact(decoherence::PointerModel::exact(n1, g)) *
        decoherence::pointer_overlap_exact(decoherence::PointerModel::exact(n2, g));
    if (!(joined == split))
      return {false, "composition failed at gamma=" + g.str() + " n1=" + std::to_string(n1) +
                         " n2=" + std::to_string(n2)};
  }
  const double per_degree =
      decoherence::pointer_overlap_log(decoherence::PointerModel::real(1, 0.9)).ln_mag;
  for (std::int64_t n : {1000, 250000, 1000000}) {
    const double ln =
        decoherence::pointer_overlap_log(decoherence::PointerModel::real(n, 0.9)).ln_mag;
    const double want = static_cast<double>(n) * per_degree;
    if (std::fabs(ln - want) / std::fabs(want) > 1e-9)
      return {false, "log-linearity broke at n=" + std::to_string(n)};
  }
  return {true, "40 exact compositions, log-linear through n = 1000000"};
}

// Criterion 7: every experiment is bit-reproducible; two runs of the same
// config write identical bytes.
Outcome reproducibility() {
  const char* docs[] = {
      "experiment = sweep\nn = 10,40\nalpha = 0,1\np = 9/10\nepsilon = 1/5\n",
      "experiment = sweep\nn = 100000\nalpha = 0,1/2,1\nmode = asymptotic\n"
      "p = 9/10\nepsilon = 1/5\n",
      "experiment = decoherence\nn = 1,10,100\ngamma = 9/10\n",
      "experiment = ratefn\na = 3/5,7/10\np = 9/10\nn = 500\n",
      "experiment = envariance\np = 7/19\n",
      "experiment = maverick\nn = 64\np = 2/3\nepsilon = 1/10\nformat = json\n",
  };
  const fs::path dir = fs::temp_directory_path();
  int checked = 0;
  for (const char* doc : docs) {
    const harness::ParseResult parsed = harness::parse_config(doc);
    if (!parsed.config) return {false, std::string("config failed to parse: ") + doc};
    // same config both times, output path included: the payload may echo it
    const fs::path out = dir / ("branchlab_accept_" + std::to_string(::getpid()) + "_" +
                                std::to_string(checked));
    std::string bytes[2];
    for (int rep = 0; rep < 2; ++rep) {
      harness::ExperimentConfig cfg = *parsed.config;
      cfg.out = out.string();
      std::ostringstream sink;
      const harness::RunResult r = harness::run(cfg, sink, sink);
      if (r.exit_code != 0) {
        fs::remove(out);
        return {false, std::string("run failed for: ") + doc};
      }
      std::ifstream in(out, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      bytes[rep] = buf.str();
      fs::remove(out);
    }
    if (bytes[0] != bytes[1] || bytes[0].empty())
      return {false, std::string("outputs differ for: ") + doc};
    ++checked;
  }
  return {true, std::to_string(checked) + " experiment configs byte-stable"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact agreement with brute-force enumeration", 60.0, oracle_equivalence},
      {2, "counting vs quadratic divergence at n=100", 5.0, measure_divergence},
      {3, "analytic decay rates reached by n=2000", 120.0, rate_convergence},
      {4, "measurement reversibility and isometry", 10.0, reversibility},
      {5, "two-outcome weights from swap symmetry", 10.0, weight_recovery},
      {6, "record overlap composition and log-linearity", 10.0, overlap_scaling},
      {7, "byte-identical reruns for every experiment", 60.0, reproducibility},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& ex) {
      outcome = {false, std::string("exception: ") + ex.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = elapsed < c.budget_s;
    const bool pass = outcome.ok && in_budget;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s: %s%s (%.2fs, budget %.0fs)\n", pass ? "PASS" : "FAIL",
                c.id, c.name, outcome.detail.c_str(),
                outcome.ok && !in_budget ? " [over budget]" : "", elapsed, c.budget_s);
    std::fflush(stdout);
  }
  return failures;
}
