#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tdec/ingest.hpp"

namespace tdec {

// Latent-factor signal model: `latent_rank` independent AR(1) processes mixed
// into `channels` channels plus white measurement noise. Coordination
// complexity grows with latent_rank.
struct SynthSpec {
  std::size_t channels = 6;
  std::size_t length_samples = 1000;
  double sample_rate_hz = 100.0;
  std::size_t latent_rank = 1;
  double noise_amplitude = 0.05;
  double smoothing_halflife_samples = 4.0;
  std::uint64_t seed = 0;
  Modality modality = Modality::OTHER;

  void validate() const;
};

// Channel names for a modality: the six constriction TVs, the seventeen
// tracked FAUs, or ch0..chN-1 otherwise (also used when counts don't match).
std::vector<std::string> default_channel_names(Modality modality, std::size_t channels);

// Draw order (fixes the stream for a seed): mixing matrix row-major, then each
// latent process in turn, then the noise sample by sample across channels.
// Each channel's mixing row is a standard normal draw scaled to unit norm, so
// every channel carries unit signal variance at every rank.
ChannelSet generate(const SynthSpec& spec);

struct ClassSpec {
  Label label = Label::HC;
  std::size_t subjects = 1;
  SynthSpec tmpl;  // length_samples and seed are set per subject
};

struct CohortOptions {
  std::size_t segments_per_subject = 3;
  double segment_s = 10.0;
  double gap_s = 2.0;      // interviewer turn between subject turns
  double jitter = 0.0;     // relative spread of per-subject noise and smoothing
  std::uint64_t seed = 0;
};

struct SubjectRecording {
  std::string subject_id;
  Label label = Label::HC;
  ChannelSet signals;
  SegmentManifest manifest;
};

inline constexpr const char* kInterviewer = "interviewer";

// Subject ids are "<LABEL><nn>" numbered from 01 within each class. The
// manifest layout depends only on the options, so recordings of different
// modalities generated with the same options share segment keys. Per-subject
// streams are derive_seed(derive_seed(seed, modality), class * 1000 + subject).
std::vector<SubjectRecording> generate_cohort(const std::vector<ClassSpec>& classes,
                                              const CohortOptions& options);

}  // namespace tdec
