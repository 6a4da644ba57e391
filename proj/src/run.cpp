#include "wardtrans/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "wardtrans/csv.hpp"
#include "wardtrans/dates.hpp"
#include "wardtrans/ingest.hpp"
#include "wardtrans/parallel.hpp"
#include "wardtrans/samples_io.hpp"

namespace wardtrans {

namespace fs = std::filesystem;
using nlohmann::json;

std::string pair_stem(const std::string& ward_id, ModelKind model) {
  return ward_id + "__" + to_string(model);
}

namespace {

constexpr const char* kArtifactVersion = "wardtrans 0.1.0";

void require_input_files(const RunConfig& config) {
  for (const auto& [label, path] :
       std::initializer_list<std::pair<const char*, const std::string*>>{
           {"admissions", &config.admissions_path},
           {"tests", &config.tests_path},
           {"precautions", &config.precautions_path}}) {
    if (path->empty()) {
      throw ValidationError(std::string("[run] ") + label + " path is not set");
    }
    if (!fs::exists(*path)) {
      throw ValidationError(std::string(label) + " file not found: '" + *path + "'");
    }
  }
  if (config.study_start.empty() || config.study_end.empty()) {
    throw ValidationError("[run] study_start and study_end are mandatory");
  }
  if (config.seed == 0) {
    throw ValidationError("[run] seed must be a non-zero integer");
  }
}

struct LoadedWards {
  std::vector<WardData> wards;
};

LoadedWards load_wards(const RunConfig& config) {
  require_input_files(config);
  const auto table = parse_ward_files(config.admissions_path, config.tests_path,
                                      config.precautions_path);
  std::vector<std::string> ids =
      config.wards.empty() ? table.ward_ids() : config.wards;
  const long start = parse_iso_date(config.study_start);
  const long end = parse_iso_date(config.study_end);
  LoadedWards out;
  for (const auto& id : ids) {
    out.wards.push_back(
        build_ward_data(table, id, start, end, config.readmission_window));
  }
  return out;
}

json counters_json(const MoveCounters& c) {
  return json{{"attempts", c.attempts},
              {"accepts", c.accepts},
              {"rejected_negative", c.rejected_negative},
              {"rate", c.rate()}};
}

json manifest_json(const RunConfig& config, const WardData& ward,
                   ModelKind model, const SamplerConfig& sampler,
                   const PosteriorSamples& samples) {
  const auto sd = sampler.resolved_rw_sd();
  json m;
  m["artifact"] = kArtifactVersion;
  m["ward"] = ward.ward_id;
  m["model"] = to_string(model);
  m["base_seed"] = config.seed;
  m["chain_seed"] = sampler.seed;
  m["data"] = {{"admissions", config.admissions_path},
               {"tests", config.tests_path},
               {"precautions", config.precautions_path},
               {"study_start", config.study_start},
               {"study_end", config.study_end},
               {"readmission_window_days", config.readmission_window},
               {"episodes", ward.size()},
               {"new_admissions", ward.n_new_admissions},
               {"positive_tests", ward.n_positive_tests}};
  m["sampler"] = {{"iterations", sampler.iterations},
                  {"burn_in", sampler.burn_in},
                  {"thin", sampler.thin},
                  {"phi0", sampler.phi0},
                  {"rw_sd", {sd[0], sd[1], sd[2]}},
                  {"moves_per_iteration", sampler.moves_per_iteration},
                  {"snapshot_stride", sampler.snapshot_stride},
                  {"recompute_stride", sampler.recompute_stride},
                  {"init_beta_mean", sampler.init_beta_mean}};
  m["priors"] = {{"p_alpha", sampler.prior.p_alpha},
                 {"p_beta", sampler.prior.p_beta},
                 {"phi_alpha", sampler.prior.phi_alpha},
                 {"phi_beta", sampler.prior.phi_beta},
                 {"beta0_rate", sampler.prior.beta0_rate},
                 {"beta1_rate", sampler.prior.beta1_rate},
                 {"beta2_rate", sampler.prior.beta2_rate}};
  m["results"] = {{"draws", samples.draws.size()},
                  {"snapshots", samples.snapshots.size()},
                  {"max_recompute_rel_error", samples.max_recompute_rel_error},
                  {"acceptance",
                   {{"beta0", counters_json(samples.beta_updates[0])},
                    {"beta1", counters_json(samples.beta_updates[1])},
                    {"beta2", counters_json(samples.beta_updates[2])},
                    {"add", counters_json(samples.add_move)},
                    {"delete", counters_json(samples.delete_move)},
                    {"shift", counters_json(samples.shift_move)}}}};
  return m;
}

std::uint64_t chain_seed(const RunConfig& config, const std::string& ward_id,
                         ModelKind model) {
  return derive_seed(config.seed, fnv1a(ward_id + "/" + to_string(model)));
}

}  // namespace

int cmd_fit(const RunConfig& config, int jobs) {
  const LoadedWards loaded = load_wards(config);
  const fs::path outdir = config.output_dir;
  fs::create_directories(outdir);

  struct Job {
    const WardData* ward;
    ModelKind model;
  };
  std::vector<Job> pairs;
  for (const auto& ward : loaded.wards) {
    for (ModelKind model : config.models) pairs.push_back({&ward, model});
  }

  std::vector<std::string> failures(pairs.size());
  parallel_for(static_cast<long>(pairs.size()), jobs, [&](long i) {
    const Job& job = pairs[static_cast<std::size_t>(i)];
    const std::string stem = pair_stem(job.ward->ward_id, job.model);
    try {
      const SamplerConfig sampler = config.sampler_for(
          job.model, chain_seed(config, job.ward->ward_id, job.model));
      const PosteriorSamples samples = run_chain(*job.ward, sampler);
      write_file_atomic(outdir / (stem + "_samples.csv"), samples_to_csv(samples));
      write_file_atomic(outdir / (stem + "_snapshots.csv"),
                        snapshots_to_csv(samples, *job.ward));
      write_file_atomic(outdir / (stem + "_manifest.json"),
                        manifest_json(config, *job.ward, job.model, sampler,
                                      samples).dump(2) + "\n");
      std::fprintf(stderr, "fit %-28s draws=%zu add=%.2f shift=%.2f\n",
                   stem.c_str(), samples.draws.size(), samples.add_move.rate(),
                   samples.shift_move.rate());
    } catch (const std::exception& err) {
      failures[static_cast<std::size_t>(i)] = err.what();
    }
  });

  int failed = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!failures[i].empty()) {
      ++failed;
      std::fprintf(stderr, "fit %s FAILED: %s\n",
                   pair_stem(pairs[i].ward->ward_id, pairs[i].model).c_str(),
                   failures[i].c_str());
    }
  }
  return failed == 0 ? kExitOk : kExitRuntime;
}

int cmd_assess(const RunConfig& config, const std::string& runs_dir, int jobs) {
  const LoadedWards loaded = load_wards(config);
  const fs::path indir = runs_dir.empty() ? fs::path(config.output_dir) : fs::path(runs_dir);
  const fs::path outdir = config.output_dir;
  fs::create_directories(outdir);

  struct Entry {
    const WardData* ward;
    ModelKind model;
    EfficacySummary efficacy;
    double dic = 0;
    bool ok = false;
    std::string error;
  };
  std::vector<Entry> entries;
  for (const auto& ward : loaded.wards) {
    for (ModelKind model : config.models) entries.push_back({&ward, model});
  }

  parallel_for(static_cast<long>(entries.size()), jobs, [&](long i) {
    Entry& entry = entries[static_cast<std::size_t>(i)];
    const std::string stem = pair_stem(entry.ward->ward_id, entry.model);
    try {
      const fs::path samples_path = indir / (stem + "_samples.csv");
      const fs::path snapshots_path = indir / (stem + "_snapshots.csv");
      if (!fs::exists(samples_path)) {
        throw ValidationError("missing sample file '" + samples_path.string() +
                              "'; run `wardtrans fit` first");
      }
      const PosteriorSamples samples = read_samples_csv(
          samples_path.string(), snapshots_path.string(), *entry.ward, entry.model);
      AssessConfig assess = config.assess;
      assess.seed = derive_seed(config.seed, fnv1a("assess/" + stem));
      assess.dic.seed = derive_seed(config.seed, fnv1a("dic/" + stem));
      assess.threads = 1;  // pairs already run in parallel
      const AssessmentReport report =
          run_assessment(samples, *entry.ward, entry.model, assess);
      write_file_atomic(outdir / (stem + "_report.json"), report_to_json(report));
      write_file_atomic(outdir / (stem + "_trajectories.csv"),
                        trajectory_bands_to_csv(report.bands));
      entry.efficacy = report.efficacy;
      entry.dic = report.dic6;
      entry.ok = true;
      std::fprintf(stderr, "assess %-28s dic6=%.2f ppp=%.3f\n", stem.c_str(),
                   report.dic6, report.ppp);
    } catch (const std::exception& err) {
      entry.error = err.what();
    }
  });

  int failed = 0;
  for (const auto& entry : entries) {
    if (!entry.ok) {
      ++failed;
      std::fprintf(stderr, "assess %s FAILED: %s\n",
                   pair_stem(entry.ward->ward_id, entry.model).c_str(),
                   entry.error.c_str());
    }
  }

  // DIC table across wards and models, Table-4 style.
  std::string dic_csv = "ward";
  for (ModelKind model : config.models) dic_csv += "," + to_string(model);
  dic_csv += "\n";
  for (const auto& ward : loaded.wards) {
    dic_csv += ward.ward_id;
    for (ModelKind model : config.models) {
      const auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) {
        return e.ward == &ward && e.model == model;
      });
      dic_csv += ",";
      dic_csv += (it != entries.end() && it->ok) ? format_double(it->dic) : "";
    }
    dic_csv += "\n";
  }
  write_file_atomic(outdir / "dic_table.csv", dic_csv);

  // Cross-ward pooled efficacy per model.
  for (ModelKind model : config.models) {
    std::vector<std::pair<double, double>> per_ward;
    json wards_json = json::array();
    for (const auto& entry : entries) {
      if (entry.model != model || !entry.ok) continue;
      if (entry.efficacy.log_ratio_variance <= 0) continue;
      per_ward.emplace_back(entry.efficacy.log_ratio_mean,
                            entry.efficacy.log_ratio_variance);
      wards_json.push_back({{"ward", entry.ward->ward_id},
                            {"estimate", entry.efficacy.log_ratio_mean},
                            {"variance", entry.efficacy.log_ratio_variance}});
    }
    if (per_ward.empty()) continue;
    const PooledEstimate pooled = pool_efficacy(per_ward);
    json pj;
    pj["model"] = to_string(model);
    pj["statistic"] = "log(beta1/beta2)";
    pj["pooled_estimate"] = pooled.estimate;
    pj["pooled_variance"] = pooled.variance;
    pj["ci95"] = {pooled.lower, pooled.upper};
    pj["wards"] = wards_json;
    write_file_atomic(outdir / ("pooled_efficacy_" + to_string(model) + ".json"),
                      pj.dump(2) + "\n");
  }

  return failed == 0 ? kExitOk : kExitRuntime;
}

int cmd_simulate(const RunConfig& config, const std::string& out_dir) {
  if (config.seed == 0) {
    throw ValidationError("[run] seed must be a non-zero integer");
  }
  const fs::path outdir = out_dir.empty() ? fs::path(config.output_dir) : fs::path(out_dir);
  fs::create_directories(outdir);
  const long epoch = parse_iso_date(config.simulate_epoch);

  std::string admissions, tests, precautions, truth;
  for (long w = 0; w < config.simulate_wards; ++w) {
    SyntheticWardConfig sim = config.simulate;
    if (config.simulate_wards > 1) {
      sim.ward_id += "_" + std::to_string(w + 1);
    }
    sim.seed = derive_seed(config.seed, fnv1a("simulate/" + sim.ward_id));
    const SyntheticWard synth = generate_synthetic_ward(sim);
    const SerializedWard files = serialize_ward(synth.ward, epoch);
    auto append = [w](std::string& sink, const std::string& text) {
      if (w == 0) {
        sink = text;
      } else {  // drop the repeated header line
        sink += text.substr(text.find('\n') + 1);
      }
    };
    append(admissions, files.admissions_csv);
    append(tests, files.tests_csv);
    append(precautions, files.precautions_csv);
    const std::string truth_csv = serialize_truth(synth.ward, synth.truth);
    if (w == 0) {
      truth = truth_csv;
    } else {
      truth += truth_csv.substr(truth_csv.find('\n') + 1);
    }

    // Table-1 style summary of the generated ward.
    std::vector<double> los, swabs, positives;
    long under_precautions = 0;
    for (const auto& ep : synth.ward.episodes) {
      los.push_back(ep.discharge - ep.admit);
      swabs.push_back(static_cast<double>(ep.tests.size()));
      long pos = 0;
      for (const auto& t : ep.tests) pos += t.positive ? 1 : 0;
      positives.push_back(static_cast<double>(pos));
      if (!ep.precautions.empty()) ++under_precautions;
    }
    std::fprintf(stderr,
                 "%s: patients=%zu los=%.1f(%.1f) precautions=%.1f%% "
                 "swabs/person=%.1f(%.1f) positive/person=%.1f(%.1f)\n",
                 sim.ward_id.c_str(), synth.ward.size(), mean(los),
                 los.size() > 1 ? sample_sd(los) : 0.0,
                 100.0 * under_precautions / synth.ward.size(), mean(swabs),
                 swabs.size() > 1 ? sample_sd(swabs) : 0.0, mean(positives),
                 positives.size() > 1 ? sample_sd(positives) : 0.0);
  }

  write_file_atomic(outdir / "admissions.csv", admissions);
  write_file_atomic(outdir / "tests.csv", tests);
  write_file_atomic(outdir / "precautions.csv", precautions);
  write_file_atomic(outdir / "truth.csv", truth);
  return kExitOk;
}

RecoveryOutcome recover_experiment(const RecoverySpec& spec) {
  RecoveryOutcome outcome;
  outcome.truth = spec.sim.theta;
  outcome.wards.resize(static_cast<std::size_t>(spec.n_wards));

  parallel_for(spec.n_wards, spec.jobs, [&](long w) {
    SyntheticWardConfig sim = spec.sim;
    sim.ward_id = spec.sim.ward_id + "_" + std::to_string(w + 1);
    sim.seed = derive_seed(spec.seed, fnv1a("recover-sim/" + sim.ward_id));
    const SyntheticWard synth = generate_synthetic_ward(sim);

    SamplerConfig sampler = spec.sampler;
    sampler.model = spec.sim.theta.kind;
    sampler.seed = derive_seed(spec.seed, fnv1a("recover-fit/" + sim.ward_id));
    const PosteriorSamples samples = run_chain(synth.ward, sampler);

    WardRecovery& rec = outcome.wards[static_cast<std::size_t>(w)];
    rec.ward_id = sim.ward_id;
    const double truth[5] = {spec.sim.theta.p, spec.sim.theta.phi,
                             spec.sim.theta.beta0, spec.sim.theta.beta1,
                             spec.sim.theta.beta2};
    for (int k = 0; k < 5; ++k) {
      rec.interval[k] = credible_interval_95(samples.component(k));
      rec.covered[k] = rec.interval[k].contains(truth[k]);
    }
    std::fprintf(stderr, "recover %-14s p[%.3f,%.3f] phi[%.3f,%.3f]\n",
                 sim.ward_id.c_str(), rec.interval[0].lower,
                 rec.interval[0].upper, rec.interval[1].lower,
                 rec.interval[1].upper);
  });

  for (const auto& rec : outcome.wards) {
    for (int k = 0; k < 5; ++k) {
      if (rec.covered[k]) ++outcome.covered_count[k];
    }
  }
  return outcome;
}

int cmd_recover(const RunConfig& config, int jobs) {
  if (config.seed == 0) {
    throw ValidationError("[run] seed must be a non-zero integer");
  }
  RecoverySpec spec;
  spec.sim = config.simulate;
  spec.sampler = config.sampler_for(config.simulate.theta.kind, 0);
  spec.n_wards = config.recover_wards;
  spec.jobs = jobs;
  spec.seed = config.seed;
  const RecoveryOutcome outcome = recover_experiment(spec);

  static const char* names[5] = {"p", "phi", "beta0", "beta1", "beta2"};
  json report;
  report["artifact"] = kArtifactVersion;
  report["model"] = to_string(config.simulate.theta.kind);
  report["n_wards"] = config.recover_wards;
  report["truth"] = {{"p", outcome.truth.p},
                     {"phi", outcome.truth.phi},
                     {"beta0", outcome.truth.beta0},
                     {"beta1", outcome.truth.beta1},
                     {"beta2", outcome.truth.beta2}};
  json coverage;
  for (int k = 0; k < 5; ++k) coverage[names[k]] = outcome.covered_count[k];
  report["ci95_coverage"] = coverage;
  json wards = json::array();
  for (const auto& rec : outcome.wards) {
    json entry;
    entry["ward"] = rec.ward_id;
    for (int k = 0; k < 5; ++k) {
      entry[names[k]] = {{"lower", rec.interval[k].lower},
                         {"upper", rec.interval[k].upper},
                         {"covered", rec.covered[k]}};
    }
    wards.push_back(entry);
  }
  report["wards"] = wards;

  const fs::path outdir = config.output_dir;
  fs::create_directories(outdir);
  write_file_atomic(outdir / "recovery_report.json", report.dump(2) + "\n");

  std::fprintf(stderr, "coverage over %ld wards:", config.recover_wards);
  for (int k = 0; k < 5; ++k) {
    std::fprintf(stderr, " %s=%ld/%ld", names[k], outcome.covered_count[k],
                 config.recover_wards);
  }
  std::fprintf(stderr, "\n");
  return kExitOk;
}

}  // namespace wardtrans
