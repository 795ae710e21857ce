#include "branchlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace branchlab::harness {

std::string experiment_str(Experiment e) {
  switch (e) {
    case Experiment::maverick: return "maverick";
    case Experiment::sweep: return "sweep";
    case Experiment::envariance: return "envariance";
    case Experiment::decoherence: return "decoherence";
    case Experiment::ratefn: return "ratefn";
    case Experiment::selftest: return "selftest";
  }
  throw std::logic_error("unreachable");
}

std::optional<Experiment> experiment_parse(const std::string& s) {
  for (Experiment e : {Experiment::maverick, Experiment::sweep, Experiment::envariance,
                       Experiment::decoherence, Experiment::ratefn, Experiment::selftest})
    if (experiment_str(e) == s) return e;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (v > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10) return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// One setter per key; returns an error string on failure.
std::optional<std::string> set_field(ExperimentConfig& cfg, const std::string& key,
                                     const std::string& value) {
  try {
    if (key == "experiment") {
      const auto e = experiment_parse(value);
      if (!e) return "experiment: unknown experiment '" + value + "'";
      cfg.experiment = *e;
    } else if (key == "n") {
      std::vector<std::uint64_t> ns;
      for (const std::string& item : split_list(value)) {
        const auto v = parse_uint(item);
        if (!v) return "n: not a positive integer: '" + item + "'";
        ns.push_back(*v);
      }
      cfg.n_values = std::move(ns);
    } else if (key == "p") {
      cfg.p = ExactProb::parse(value);
    } else if (key == "epsilon") {
      cfg.epsilon = ExactProb::parse(value);
    } else if (key == "alpha") {
      std::vector<BigRat> as;
      for (const std::string& item : split_list(value)) as.push_back(ExactProb::parse(item).rat());
      cfg.alphas = std::move(as);
    } else if (key == "gamma") {
      cfg.gamma = ExactProb::parse(value);
    } else if (key == "a") {
      std::vector<BigRat> as;
      for (const std::string& item : split_list(value)) as.push_back(ExactProb::parse(item).rat());
      cfg.a_values = std::move(as);
    } else if (key == "mode") {
      const auto m = measures::mode_parse(value);
      if (!m) return "mode: expected exact or asymptotic, got '" + value + "'";
      cfg.mode = *m;
    } else if (key == "comparison") {
      if (value == "strict")
        cfg.comparison = measures::MaverickRule::Cmp::strict;
      else if (value == "inclusive")
        cfg.comparison = measures::MaverickRule::Cmp::inclusive;
      else
        return "comparison: expected strict or inclusive, got '" + value + "'";
    } else if (key == "format") {
      if (value == "csv")
        cfg.format = Format::csv;
      else if (value == "json")
        cfg.format = Format::json;
      else
        return "format: expected csv or json, got '" + value + "'";
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "cap") {
      const auto v = parse_uint(value);
      if (!v || *v == 0) return "cap: not a positive integer: '" + value + "'";
      cfg.cap = *v;
    } else {
      return "unknown key '" + key + "'";
    }
  } catch (const std::exception& ex) {
    return key + ": " + ex.what();
  }
  return std::nullopt;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  const auto need_n = [&](const char* why) {
    if (cfg.n_values.empty())
      errors.push_back(std::string("n: required for ") + why);
    else
      for (std::uint64_t n : cfg.n_values)
        if (n == 0) errors.push_back("n: must be positive");
  };

  if (!cfg.p.in_unit_interval()) errors.push_back("p: probability out of range");
  if (cfg.epsilon.is_zero() || !(cfg.epsilon < ExactProb(1)))
    errors.push_back("epsilon: must lie strictly between 0 and 1");
  if (!cfg.gamma.in_unit_interval()) errors.push_back("gamma: out of range");

  switch (cfg.experiment) {
    case Experiment::maverick:
      need_n("maverick");
      if (cfg.n_values.size() > 1) errors.push_back("n: maverick takes a single n");
      break;
    case Experiment::sweep:
      need_n("sweep");
      break;
    case Experiment::decoherence:
      need_n("decoherence");
      break;
    case Experiment::envariance:
      if (cfg.p.is_zero() || cfg.p.is_one() || !cfg.p.in_unit_interval())
        errors.push_back("p: envariance needs 0 < p < 1");
      break;
    case Experiment::ratefn:
      if (cfg.a_values.empty()) errors.push_back("a: required for ratefn");
      for (const BigRat& a : cfg.a_values)
        if (!(a > BigRat(1, 2)) || !(a < 1))
          errors.push_back("a: threshold must lie strictly between 1/2 and 1");
      if (cfg.p.is_zero() || cfg.p.is_one())
        errors.push_back("p: ratefn needs 0 < p < 1");
      break;
    case Experiment::selftest:
      break;
  }

  if (cfg.experiment == Experiment::maverick || cfg.experiment == Experiment::sweep) {
    if (cfg.alphas.empty()) errors.push_back("alpha: at least one exponent required");
    for (const BigRat& a : cfg.alphas) {
      if (sgn(a) < 0) errors.push_back("alpha: must be non-negative");
      if (cfg.mode == measures::Mode::exact && a.get_den() != 1)
        errors.push_back("alpha: exact mode needs integer alpha (got " + a.get_str() +
                         "); use mode = asymptotic");
    }
  }
  return errors;
}

}  // namespace

std::string ExperimentConfig::serialize() const {
  std::ostringstream out_s;
  const auto join_n = [&] {
    std::string s;
    for (std::size_t i = 0; i < n_values.size(); ++i)
      s += (i ? "," : "") + std::to_string(n_values[i]);
    return s;
  };
  const auto join_rats = [](const std::vector<BigRat>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s;
  };
  out_s << "experiment = " << experiment_str(experiment) << "\n";
  out_s << "n = " << join_n() << "\n";
  out_s << "p = " << p.str() << "\n";
  out_s << "epsilon = " << epsilon.str() << "\n";
  out_s << "alpha = " << join_rats(alphas) << "\n";
  out_s << "gamma = " << gamma.str() << "\n";
  out_s << "a = " << join_rats(a_values) << "\n";
  out_s << "mode = " << measures::mode_str(mode) << "\n";
  out_s << "comparison = "
        << (comparison == measures::MaverickRule::Cmp::strict ? "strict" : "inclusive") << "\n";
  out_s << "format = " << (format == Format::csv ? "csv" : "json") << "\n";
  out_s << "out = " << out << "\n";
  out_s << "cap = " << cap << "\n";
  return out_s.str();
}

std::string ExperimentConfig::resolved_out() const {
  if (!out.empty()) return out;
  const char* ext = format == Format::csv ? ".csv" : ".json";
  if (experiment == Experiment::envariance) ext = format == Format::json ? ".json" : ".txt";
  return experiment_str(experiment) + ext;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  ExperimentConfig cfg;
  bool saw_experiment = false;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "experiment") saw_experiment = true;
    if (auto err = set_field(cfg, key, value)) result.errors.push_back(*err);
  }

  if (!saw_experiment) result.errors.push_back("experiment: missing");
  for (std::string& err : validate(cfg)) result.errors.push_back(std::move(err));
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

ParseResult apply_overrides(ExperimentConfig base,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  ParseResult result;
  for (const auto& [key, value] : overrides)
    if (auto err = set_field(base, key, value)) result.errors.push_back(*err);
  for (std::string& err : validate(base)) result.errors.push_back(std::move(err));
  if (result.errors.empty()) result.config = std::move(base);
  return result;
}

}  // namespace branchlab::harness
