#include "branchlab/harness.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "branchlab/decoherence.hpp"
#include "branchlab/envariance.hpp"
#include "branchlab/measures.hpp"
#include "branchlab/oracle.hpp"
#include "branchlab/version.hpp"

namespace branchlab::harness {

namespace {

using nlohmann::ordered_json;

ordered_json config_echo(const ExperimentConfig& cfg) {
  ordered_json echo = ordered_json::object();
  std::istringstream in(cfg.serialize());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return echo;
}

std::string table_payload(const ExperimentConfig& cfg, const csv::Table& table) {
  if (cfg.format == Format::csv) return csv::emit(table);
  ordered_json doc;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = config_echo(cfg);
  doc["columns"] = table.columns;
  doc["rows"] = table.rows;
  return doc.dump(2) + "\n";
}

std::string certificate_payload(const ExperimentConfig& cfg, const std::string& certificate) {
  if (cfg.format == Format::csv) return certificate;
  ordered_json doc;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  doc["config"] = config_echo(cfg);
  doc["certificate"] = certificate;
  return doc.dump(2) + "\n";
}

void write_payload(const ExperimentConfig& cfg, const std::string& payload, std::ostream& log,
                   std::ostream& primary, RunResult& result) {
  const std::string path = cfg.resolved_out();
  if (path == "-") {
    primary << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << payload;
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
  result.files_written.push_back(path);
  log << "[" << kToolName << "] wrote " << path << "\n";
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

csv::Row sweep_row(const measures::SweepCell& cell, const ExperimentConfig& cfg) {
  csv::Row row;
  row.push_back(std::to_string(cell.n));
  row.push_back(cfg.p.str());
  row.push_back(cfg.epsilon.str());
  row.push_back(cell.alpha.get_str());
  if (!cell.report) {
    row.insert(row.end(), {"error", "", "", "", ""});
    return row;
  }
  const measures::MaverickReport& r = *cell.report;
  row.push_back(measures::mode_str(r.mode));
  if (r.mode == measures::Mode::exact) {
    row.push_back(r.maverick_mass->str());
    row.push_back(r.nonmaverick_mass->str());
  } else {
    row.push_back(r.maverick_ln.str());
    row.push_back(r.nonmaverick_ln.str());
  }
  row.push_back(measures::hoeffding_bound(r.n, r.epsilon).str());
  row.push_back(r.maverick_ln.str());
  return row;
}

csv::Table decoherence_table(const ExperimentConfig& cfg) {
  csv::Table table;
  table.columns = {"n_env", "gamma", "overlap", "visibility_ln", "rate"};
  for (std::uint64_t n : sorted_unique(cfg.n_values)) {
    if (cfg.mode == measures::Mode::exact && n > cfg.cap)
      throw measures::ExactCapExceeded(n, cfg.cap);
    const auto model = decoherence::PointerModel::exact(static_cast<std::int64_t>(n), cfg.gamma);
    csv::Row row;
    row.push_back(std::to_string(n));
    row.push_back(cfg.gamma.str());
    row.push_back(cfg.mode == measures::Mode::exact
                      ? decoherence::pointer_overlap_exact(model).str()
                      : decoherence::pointer_overlap_log(model).str());
    row.push_back(decoherence::interference_visibility(cfg.p, model).str());
    const bool degenerate = cfg.gamma.is_zero() || cfg.gamma.is_one();
    row.push_back(degenerate ? "" : format_fixed_sig(decoherence_rate(model)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

csv::Table ratefn_table(const ExperimentConfig& cfg) {
  csv::Table table;
  table.columns = {"a",
                   "p",
                   "n",
                   "counting_rate_bits",
                   "counting_empirical_bits",
                   "born_rate_nats",
                   "born_empirical_nats"};
  std::vector<BigRat> as = cfg.a_values;
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());

  std::optional<std::uint64_t> n;
  if (!cfg.n_values.empty()) {
    n = cfg.n_values.front();
    if (*n > cfg.cap) throw measures::ExactCapExceeded(*n, cfg.cap);
  }

  for (const BigRat& a : as) {
    csv::Row row;
    row.push_back(a.get_str());
    row.push_back(cfg.p.str());
    row.push_back(n ? std::to_string(*n) : "");
    row.push_back(format_fixed_sig(measures::counting_rate(a)));
    if (n) {
      const ExactProb tail = measures::counting_tail_mass(*n, ExactProb(a));
      const double bits = to_logreal(tail).ln_mag / M_LN2 / static_cast<double>(*n);
      row.push_back(format_fixed_sig(bits));
    } else {
      row.push_back("");
    }
    row.push_back(format_fixed_sig(measures::born_rate(a, cfg.p)));
    if (n) {
      const ExactProb cls = measures::born_class_mass(*n, cfg.p, ExactProb(a));
      row.push_back(format_fixed_sig(-to_logreal(cls).ln_mag / static_cast<double>(*n)));
    } else {
      row.push_back("");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

csv::Table sweep_table(const ExperimentConfig& cfg, std::vector<std::string>* cell_errors) {
  csv::Table table;
  table.columns = {"n",        "p",
                   "epsilon",  "alpha",
                   "mode",     "maverick_mass",
                   "nonmaverick_mass", "hoeffding_bound",
                   "ln_maverick_mass"};
  const std::vector<measures::SweepCell> cells = measures::sweep(
      cfg.n_values, cfg.p, cfg.epsilon, cfg.alphas, cfg.mode, cfg.comparison, cfg.cap);
  for (const measures::SweepCell& cell : cells) {
    table.rows.push_back(sweep_row(cell, cfg));
    if (!cell.report && cell_errors)
      cell_errors->push_back("n=" + std::to_string(cell.n) + " alpha=" + cell.alpha.get_str() +
                             ": " + cell.error);
  }
  return table;
}

bool selftest(std::ostream& log) {
  const std::vector<ExactProb> ps = {ExactProb(1, 2), ExactProb(2, 3), ExactProb(9, 10)};
  const std::vector<ExactProb> epsilons = {ExactProb(1, 10), ExactProb(1, 4)};
  bool all_ok = true;
  for (std::uint64_t n = 1; n <= 12; ++n) {
    bool n_ok = true;
    for (const ExactProb& p : ps) {
      const oracle::Enumeration enumerated = oracle::enumerate_branches(n, p);
      const branching::BranchEnsemble ensemble = branching::BranchEnsemble::build(n, p);
      if (!oracle::matches_ensemble(enumerated, ensemble)) {
        log << "[selftest] n=" << n << " p=" << p.str() << " ensemble mismatch\n";
        n_ok = false;
        continue;
      }
      for (const ExactProb& eps : epsilons) {
        const measures::MaverickRule rule(eps);
        const auto counting =
            measures::measure_mass(ensemble, measures::MeasureSpec::counting(), rule);
        const auto born = measures::measure_mass(ensemble, measures::MeasureSpec::born(), rule);
        if (!(*counting.maverick_mass == oracle::counting_maverick(enumerated, rule)) ||
            !(*born.maverick_mass == oracle::born_maverick(enumerated, rule))) {
          log << "[selftest] n=" << n << " p=" << p.str() << " eps=" << eps.str()
              << " mass mismatch\n";
          n_ok = false;
        }
      }
    }
    log << "[selftest] n=" << n << (n_ok ? " ok" : " FAILED") << "\n";
    all_ok = all_ok && n_ok;
  }
  log << "[selftest] " << (all_ok ? "all checks passed" : "FAILURES above") << "\n";
  return all_ok;
}

RunResult run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& primary) {
  RunResult result;
  try {
    switch (cfg.experiment) {
      case Experiment::maverick:
      case Experiment::sweep: {
        std::vector<std::string> cell_errors;
        const csv::Table table = sweep_table(cfg, &cell_errors);
        for (const std::string& err : cell_errors)
          log << "[" << kToolName << "] cell failed: " << err << "\n";
        // A single-point run that produced nothing useful is a failure; a
        // sweep keeps going and flags bad cells in the table instead.
        if (cfg.experiment == Experiment::maverick && !cell_errors.empty())
          throw std::runtime_error(cell_errors.front());
        write_payload(cfg, table_payload(cfg, table), log, primary, result);
        break;
      }
      case Experiment::envariance: {
        const branching::QubitPrep prep(cfg.p);
        const envariance::BornDerivation derivation =
            envariance::derive_two_outcome_weights(prep, cfg.cap);
        log << "[" << kToolName << "] recovered weights " << derivation.p_plus.str() << ", "
            << derivation.p_minus.str() << "\n";
        write_payload(cfg, certificate_payload(cfg, derivation.certificate), log, primary, result);
        break;
      }
      case Experiment::decoherence:
        write_payload(cfg, table_payload(cfg, decoherence_table(cfg)), log, primary, result);
        break;
      case Experiment::ratefn:
        write_payload(cfg, table_payload(cfg, ratefn_table(cfg)), log, primary, result);
        break;
      case Experiment::selftest:
        if (!selftest(log)) {
          result.exit_code = 2;
          return result;
        }
        break;
    }
  } catch (const std::exception& ex) {
    log << "[" << kToolName << "] error: " << ex.what() << "\n";
    result.exit_code = 2;
  }
  return result;
}

}  // namespace branchlab::harness
