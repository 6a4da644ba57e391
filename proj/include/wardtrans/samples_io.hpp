#ifndef WARDTRANS_SAMPLES_IO_HPP
#define WARDTRANS_SAMPLES_IO_HPP

#include <filesystem>
#include <string>

#include "wardtrans/assess.hpp"
#include "wardtrans/mcmc.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

// One row per thinned draw:
// iteration,p,phi,beta0,beta1,beta2,loglik,n1,n_CA,n_FN
std::string samples_to_csv(const PosteriorSamples& samples);

// Long format, colonized episodes only: draw,episode_id,col_time
std::string snapshots_to_csv(const PosteriorSamples& samples,
                             const WardData& ward);

// Rebuilds the chain output from the two files; the ward provides the
// episode-id mapping and the manifest-supplied metadata pins the model.
PosteriorSamples read_samples_csv(const std::string& samples_path,
                                  const std::string& snapshots_path,
                                  const WardData& ward, ModelKind model);

std::string report_to_json(const AssessmentReport& report);
std::string trajectory_bands_to_csv(const TrajectoryBands& bands);

}  // namespace wardtrans

#endif
