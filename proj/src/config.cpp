#include "wardtrans/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wardtrans {

namespace {

struct KeyValues {
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> sections;
  mutable std::set<std::string> consumed;

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string raw(const std::string& section, const std::string& key) const {
    consumed.insert(section + "." + key);
    return sections.at(section).at(key);
  }
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
  }
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string text = raw(section, key);
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ValidationError(name + ": [" + section + "] " + key +
                            ": bad number '" + text + "'");
    }
  }
  long get_long(const std::string& section, const std::string& key,
                long fallback) const {
    const double v = get_double(section, key, static_cast<double>(fallback));
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v) {
      throw ValidationError(name + ": [" + section + "] " + key +
                            " must be an integer");
    }
    return n;
  }
  std::vector<std::string> get_list(const std::string& section,
                                    const std::string& key) const {
    std::vector<std::string> out;
    if (!has(section, key)) return out;
    std::string item;
    std::istringstream in(raw(section, key));
    while (std::getline(in, item, ',')) {
      while (!item.empty() && item.front() == ' ') item.erase(item.begin());
      while (!item.empty() && item.back() == ' ') item.pop_back();
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  void reject_unknown_keys() const {
    for (const auto& [section, keys] : sections) {
      for (const auto& [key, value] : keys) {
        if (!consumed.count(section + "." + key)) {
          throw ValidationError(name + ": unknown key '" + key +
                                "' in section [" + section + "]");
        }
      }
    }
  }
};

KeyValues tokenize(const std::string& text, const std::string& name) {
  KeyValues kv;
  kv.name = name;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    auto trim = [](std::string s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError(name + ":" + std::to_string(line_no) +
                              ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ValidationError(name + ":" + std::to_string(line_no) +
                            ": expected 'key = value' inside a [section]");
    }
    kv.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace

PriorConfig RunConfig::priors_for(ModelKind kind) const {
  PriorConfig prior;
  prior.p_alpha = p_alpha;
  prior.p_beta = p_beta;
  prior.phi_alpha = phi_alpha;
  prior.phi_beta = phi_beta;
  prior.beta1_rate = beta_rate;
  prior.beta2_rate = beta_rate;
  if (beta0_rate > 0) {
    prior.beta0_rate = beta0_rate;
  } else {
    prior.beta0_rate = kind == ModelKind::NoBackground ? 1e6 : beta_rate;
  }
  return prior;
}

SamplerConfig RunConfig::sampler_for(ModelKind kind,
                                     std::uint64_t chain_seed) const {
  SamplerConfig out = sampler;
  out.model = kind;
  out.prior = priors_for(kind);
  out.seed = chain_seed;
  return out;
}

RunConfig parse_run_config(const std::string& text, const std::string& name) {
  const KeyValues kv = tokenize(text, name);
  RunConfig config;

  if (!kv.has("run", "seed")) {
    throw ValidationError(name + ": [run] seed is mandatory");
  }
  config.seed = static_cast<std::uint64_t>(kv.get_long("run", "seed", 0));
  config.output_dir = kv.get_string("run", "output_dir", config.output_dir);
  config.admissions_path = kv.get_string("run", "admissions", "");
  config.tests_path = kv.get_string("run", "tests", "");
  config.precautions_path = kv.get_string("run", "precautions", "");
  config.study_start = kv.get_string("run", "study_start", "");
  config.study_end = kv.get_string("run", "study_end", "");
  config.readmission_window =
      kv.get_double("run", "readmission_window_days", config.readmission_window);
  config.wards = kv.get_list("run", "wards");
  if (kv.has("run", "models")) {
    config.models.clear();
    for (const auto& m : kv.get_list("run", "models")) {
      config.models.push_back(model_kind_from_string(m));
    }
    if (config.models.empty()) {
      throw ValidationError(name + ": [run] models must not be empty");
    }
  }

  config.p_alpha = kv.get_double("priors", "p_alpha", config.p_alpha);
  config.p_beta = kv.get_double("priors", "p_beta", config.p_beta);
  config.phi_alpha = kv.get_double("priors", "phi_alpha", config.phi_alpha);
  config.phi_beta = kv.get_double("priors", "phi_beta", config.phi_beta);
  config.beta_rate = kv.get_double("priors", "beta_rate", config.beta_rate);
  config.beta0_rate = kv.get_double("priors", "beta0_rate", config.beta0_rate);

  auto& s = config.sampler;
  s.iterations = kv.get_long("sampler", "iterations", s.iterations);
  s.burn_in = kv.get_long("sampler", "burn_in", s.burn_in);
  s.thin = kv.get_long("sampler", "thin", s.thin);
  s.phi0 = kv.get_double("sampler", "phi0", s.phi0);
  const double rw_all = kv.get_double("sampler", "rw_sd", 0);
  s.rw_sd = {rw_all, rw_all, rw_all};
  s.rw_sd[0] = kv.get_double("sampler", "rw_sd_beta0", s.rw_sd[0]);
  s.rw_sd[1] = kv.get_double("sampler", "rw_sd_beta1", s.rw_sd[1]);
  s.rw_sd[2] = kv.get_double("sampler", "rw_sd_beta2", s.rw_sd[2]);
  s.moves_per_iteration =
      kv.get_long("sampler", "moves_per_iteration", s.moves_per_iteration);
  s.snapshot_stride = kv.get_long("sampler", "snapshot_stride", s.snapshot_stride);
  s.recompute_stride =
      kv.get_long("sampler", "recompute_stride", s.recompute_stride);
  s.log_stride = kv.get_long("sampler", "log_stride", s.log_stride);
  s.init_beta_mean = kv.get_double("sampler", "init_beta_mean", s.init_beta_mean);

  auto& a = config.assess;
  a.interval_days = kv.get_double("assess", "interval_days", a.interval_days);
  a.trajectory_sims = kv.get_long("assess", "trajectory_sims", a.trajectory_sims);
  a.ppp_replicates = kv.get_long("assess", "ppp_replicates", a.ppp_replicates);
  a.ppp_sample_stride =
      kv.get_long("assess", "ppp_sample_stride", a.ppp_sample_stride);
  a.block_days = kv.get_double("assess", "block_days", a.block_days);
  a.dic.iterations = kv.get_long("assess", "dic_iterations", a.dic.iterations);
  a.dic.burn_in = kv.get_long("assess", "dic_burn_in", a.dic.burn_in);
  a.dic.thin = kv.get_long("assess", "dic_thin", a.dic.thin);
  a.dic.min_snapshots =
      kv.get_long("assess", "dic_min_snapshots", a.dic.min_snapshots);
  const std::string mode =
      kv.get_string("assess", "precaution_mode", "on_detection");
  if (mode == "on_detection") {
    a.policy.precaution_mode = PrecautionMode::OnDetection;
  } else if (mode == "replay") {
    a.policy.precaution_mode = PrecautionMode::ReplayObserved;
  } else {
    throw ValidationError(name + ": [assess] precaution_mode must be "
                          "on_detection or replay");
  }
  a.policy.detection_delay =
      kv.get_double("assess", "detection_delay", a.policy.detection_delay);
  a.policy.test_mode = TestScheduleMode::ReplayObserved;

  auto& sim = config.simulate;
  sim.ward_id = kv.get_string("simulate", "ward_id", sim.ward_id);
  sim.beds = static_cast<int>(kv.get_long("simulate", "beds", sim.beds));
  sim.study_days = kv.get_double("simulate", "study_days", sim.study_days);
  sim.arrival_rate = kv.get_double("simulate", "arrival_rate", sim.arrival_rate);
  sim.los_median = kv.get_double("simulate", "los_median", sim.los_median);
  sim.los_sd = kv.get_double("simulate", "los_sd", sim.los_sd);
  sim.theta.kind =
      model_kind_from_string(kv.get_string("simulate", "model", "full"));
  sim.theta.p = kv.get_double("simulate", "p", 0.78);
  sim.theta.phi = kv.get_double("simulate", "phi", 0.12);
  sim.theta.beta0 = kv.get_double("simulate", "beta0", 0.0084);
  sim.theta.beta1 = kv.get_double("simulate", "beta1", 0.0023);
  sim.theta.beta2 = kv.get_double("simulate", "beta2", 0.0025);
  sim.policy.compliance =
      kv.get_double("simulate", "compliance", sim.policy.compliance);
  sim.policy.detection_delay =
      kv.get_double("simulate", "detection_delay", sim.policy.detection_delay);
  sim.readmission_prob =
      kv.get_double("simulate", "readmission_prob", sim.readmission_prob);
  sim.readmission_gap_mean = kv.get_double("simulate", "readmission_gap_mean",
                                           sim.readmission_gap_mean);
  sim.readmission_window = config.readmission_window;
  config.simulate_wards = kv.get_long("simulate", "n_wards", config.simulate_wards);
  config.simulate_epoch =
      kv.get_string("simulate", "study_start", config.simulate_epoch);

  config.recover_wards = kv.get_long("recover", "n_wards", config.recover_wards);

  kv.reject_unknown_keys();

  // Environment overrides: output directory and log verbosity only.
  if (const char* dir = std::getenv("WARDTRANS_OUTPUT_DIR"); dir && *dir) {
    config.output_dir = dir;
  }
  if (const char* level = std::getenv("WARDTRANS_LOG_STRIDE"); level && *level) {
    config.sampler.log_stride = std::atol(level);
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

}  // namespace wardtrans
