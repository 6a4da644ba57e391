#ifndef WARDTRANS_CONFIG_HPP
#define WARDTRANS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wardtrans/assess.hpp"
#include "wardtrans/mcmc.hpp"
#include "wardtrans/simulate.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

/// Declarative run file: flat key = value lines grouped into [sections].
/// Unknown keys are rejected. See the README for the full schema.
struct RunConfig {
  // [run]
  std::uint64_t seed = 0;  // mandatory
  std::string output_dir = "out";
  std::string admissions_path, tests_path, precautions_path;
  std::string study_start, study_end;  // ISO dates
  double readmission_window = 180;
  std::vector<std::string> wards;   // empty: every ward in the files
  std::vector<ModelKind> models{ModelKind::Full, ModelKind::NoBackground,
                                ModelKind::NonLinear};

  // [priors]; beta0_rate < 0 means "beta_rate, or 1e6 for no_background"
  double p_alpha = 1, p_beta = 1, phi_alpha = 1, phi_beta = 1;
  double beta_rate = 1e-6;
  double beta0_rate = -1;

  // [sampler]
  SamplerConfig sampler;

  // [assess]
  AssessConfig assess;

  // [simulate]
  SyntheticWardConfig simulate;
  long simulate_wards = 1;
  std::string simulate_epoch = "2000-01-01";  // calendar origin of emitted CSVs

  // [recover]
  long recover_wards = 10;

  PriorConfig priors_for(ModelKind kind) const;
  SamplerConfig sampler_for(ModelKind kind, std::uint64_t chain_seed) const;
};

RunConfig parse_run_config(const std::string& text, const std::string& name);
RunConfig load_run_config(const std::string& path);

}  // namespace wardtrans

#endif
