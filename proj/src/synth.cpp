#include "tdec/synth.hpp"

#include <cmath>
#include <cstdio>

#include "tdec/error.hpp"
#include "tdec/rng.hpp"

namespace tdec {

void SynthSpec::validate() const {
  if (channels < 1) throw ValueError("synthetic signal needs at least one channel");
  if (length_samples < 2) throw ValueError("synthetic signal needs at least two samples");
  if (!(sample_rate_hz > 0.0)) throw ValueError("sample rate must be positive");
  if (latent_rank < 1 || latent_rank > channels)
    throw ValueError("latent rank " + std::to_string(latent_rank) + " must be in [1, " +
                     std::to_string(channels) + "]");
  if (!(noise_amplitude >= 0.0)) throw ValueError("noise amplitude must be nonnegative");
  if (!(smoothing_halflife_samples >= 0.0)) throw ValueError("smoothing half-life must be nonnegative");
}

std::vector<std::string> default_channel_names(Modality modality, std::size_t channels) {
  static const std::vector<std::string> tv{"LA", "LP", "TTCD", "TTCL", "TBCD", "TBCL"};
  static const std::vector<std::string> fau{"AU01", "AU02", "AU04", "AU05", "AU06", "AU07",
                                            "AU09", "AU10", "AU12", "AU14", "AU15", "AU17",
                                            "AU20", "AU23", "AU25", "AU26", "AU45"};
  if (modality == Modality::TV && channels == tv.size()) return tv;
  if (modality == Modality::FAU && channels == fau.size()) return fau;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < channels; ++c) names.push_back("ch" + std::to_string(c));
  return names;
}

ChannelSet generate(const SynthSpec& spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  const std::size_t channels = spec.channels;
  const std::size_t rank = spec.latent_rank;
  const std::size_t length = spec.length_samples;

  Matrix mixing(channels, rank);
  for (std::size_t c = 0; c < channels; ++c) {
    auto row = mixing.row(c);
    double norm2 = 0.0;
    for (double& w : row) {
      w = rng.normal();
      norm2 += w * w;
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& w : row) w *= scale;
  }

  const double a = spec.smoothing_halflife_samples > 0.0
                       ? std::exp2(-1.0 / spec.smoothing_halflife_samples)
                       : 0.0;
  const double innovation = std::sqrt(1.0 - a * a);
  Matrix latent(rank, length);
  for (std::size_t r = 0; r < rank; ++r) {
    double z = rng.normal();
    latent(r, 0) = z;
    for (std::size_t t = 1; t < length; ++t) {
      z = a * z + innovation * rng.normal();
      latent(r, t) = z;
    }
  }

  Matrix samples(length, channels);
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v = 0.0;
      for (std::size_t r = 0; r < rank; ++r) v += mixing(c, r) * latent(r, t);
      samples(t, c) = v + spec.noise_amplitude * rng.normal();
    }
  }
  return ChannelSet(spec.sample_rate_hz, default_channel_names(spec.modality, channels),
                    std::move(samples), spec.modality);
}

std::vector<SubjectRecording> generate_cohort(const std::vector<ClassSpec>& classes,
                                              const CohortOptions& options) {
  if (options.segments_per_subject < 1) throw ValueError("need at least one segment per subject");
  if (!(options.segment_s > 0.0) || !(options.gap_s >= 0.0))
    throw ValueError("segment and gap durations must be positive");
  if (!(options.jitter >= 0.0 && options.jitter < 1.0)) throw ValueError("jitter must be in [0, 1)");

  const double total_s = static_cast<double>(options.segments_per_subject) *
                             (options.segment_s + options.gap_s) +
                         options.gap_s;

  std::vector<SubjectRecording> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& cls = classes[k];
    cls.tmpl.validate();
    const std::uint64_t modality_seed =
        derive_seed(options.seed, static_cast<std::uint64_t>(cls.tmpl.modality) + 1);
    for (std::size_t s = 0; s < cls.subjects; ++s) {
      SynthSpec spec = cls.tmpl;
      spec.seed = derive_seed(modality_seed, k * 1000 + s);
      Xoshiro256 jitter_rng(derive_seed(spec.seed, 0x6A177E2));
      spec.noise_amplitude *= jitter_rng.uniform(1.0 - options.jitter, 1.0 + options.jitter);
      spec.smoothing_halflife_samples *= jitter_rng.uniform(1.0 - options.jitter, 1.0 + options.jitter);
      spec.length_samples = static_cast<std::size_t>(std::ceil(total_s * spec.sample_rate_hz));

      char id[32];
      std::snprintf(id, sizeof id, "%s%02zu", std::string(to_string(cls.label)).c_str(), s + 1);

      std::vector<ManifestEntry> entries;
      double t = 0.0;
      for (std::size_t g = 0; g < options.segments_per_subject; ++g) {
        if (options.gap_s > 0.0) entries.push_back({kInterviewer, t, t + options.gap_s});
        t += options.gap_s;
        entries.push_back({id, t, t + options.segment_s});
        t += options.segment_s;
      }
      if (options.gap_s > 0.0) entries.push_back({kInterviewer, t, t + options.gap_s});

      out.push_back({id, cls.label, generate(spec), make_manifest(std::move(entries))});
    }
  }
  return out;
}

}  // namespace tdec
