#ifndef WARDTRANS_RUN_HPP
#define WARDTRANS_RUN_HPP

#include <array>
#include <string>
#include <vector>

#include "wardtrans/config.hpp"
#include "wardtrans/stats.hpp"

namespace wardtrans {

// Exit codes shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// One chain per (ward, model) pair; posterior CSV + snapshot CSV + manifest
// JSON per pair, written atomically into the output directory.
int cmd_fit(const RunConfig& config, int jobs);

// Per (ward, model): DIC_6, predictive p-value, trajectory bands, hidden
// carriage, efficacy; plus a DIC table and pooled efficacy per model.
int cmd_assess(const RunConfig& config, const std::string& runs_dir, int jobs);

// Synthetic wards in the ingest CSV schema plus the ground-truth file.
int cmd_simulate(const RunConfig& config, const std::string& out_dir);

// simulate -> fit -> compare-to-truth in one pass.
int cmd_recover(const RunConfig& config, int jobs);

/// Full recovery experiment, exposed for the acceptance suite.
struct RecoverySpec {
  SyntheticWardConfig sim;
  SamplerConfig sampler;
  long n_wards = 10;
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct WardRecovery {
  std::string ward_id;
  std::array<CredibleInterval, 5> interval;  // p, phi, beta0, beta1, beta2
  std::array<bool, 5> covered{};
};

struct RecoveryOutcome {
  Theta truth;
  std::vector<WardRecovery> wards;
  std::array<long, 5> covered_count{};
};

RecoveryOutcome recover_experiment(const RecoverySpec& spec);

// Ward/model output naming used by fit and assess.
std::string pair_stem(const std::string& ward_id, ModelKind model);

}  // namespace wardtrans

#endif
