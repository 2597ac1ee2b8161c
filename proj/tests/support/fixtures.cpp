#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "tdec/embedding.hpp"
#include "tdec/rng.hpp"
#include "tdec/spectrum.hpp"

namespace tdec::fixture {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  Xoshiro256 rng(static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)) ^
                 static_cast<std::uint64_t>(counter++));
  path_ = fs::temp_directory_path() /
          ("tdec_" + tag + "_" + std::to_string(rng.next() % 1000000000ULL));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

FeatureInstance instance(std::vector<double> features, std::string subject, Label label,
                         Modality modality, std::string segment) {
  FeatureInstance f;
  f.features = std::move(features);
  f.subject_id = std::move(subject);
  f.label = label;
  f.modality = modality;
  f.segment_id = std::move(segment);
  return f;
}

namespace {

std::string subject_name(Label label, std::size_t s) {
  return std::string(to_string(label)) + (s < 9 ? "0" : "") + std::to_string(s + 1);
}

std::string segment_name(std::size_t k) { return "seg" + std::to_string(k); }

}  // namespace

std::vector<FeatureInstance> separable_cohort(std::size_t subjects_per_class,
                                              std::size_t segments_per_subject, std::uint64_t seed,
                                              Modality modality, std::size_t dim) {
  Xoshiro256 rng(seed);
  std::vector<FeatureInstance> out;
  for (Label label : {Label::SZ, Label::HC}) {
    const double centre = label == Label::SZ ? 3.0 : -3.0;
    for (std::size_t s = 0; s < subjects_per_class; ++s)
      for (std::size_t k = 0; k < segments_per_subject; ++k) {
        std::vector<double> x(dim);
        for (double& v : x) v = centre + 0.3 * rng.normal();
        out.push_back(instance(std::move(x), subject_name(label, s), label, modality, segment_name(k)));
      }
  }
  return out;
}

std::vector<FeatureInstance> noisy_cohort(std::size_t subjects_per_class,
                                          std::size_t segments_per_subject, std::uint64_t seed,
                                          double separation, Modality modality) {
  Xoshiro256 rng(seed);
  std::vector<FeatureInstance> out;
  for (Label label : {Label::SZ, Label::HC}) {
    const double centre = label == Label::SZ ? separation / 2 : -separation / 2;
    for (std::size_t s = 0; s < subjects_per_class; ++s) {
      const double subj = centre + 0.5 * rng.normal();
      const double other = rng.normal();
      for (std::size_t k = 0; k < segments_per_subject; ++k)
        out.push_back(instance({subj + 0.5 * rng.normal(), other + 0.5 * rng.normal()},
                               subject_name(label, s), label, modality, segment_name(k)));
    }
  }
  return out;
}

ModalityDatasets complementary_cohort(std::uint64_t seed, std::size_t subjects_per_class,
                                      std::size_t segments_per_subject) {
  Xoshiro256 rng(seed);
  ModalityDatasets out;
  for (Label label : {Label::SZ, Label::HC}) {
    const double sign = label == Label::SZ ? 1.0 : -1.0;
    for (std::size_t s = 0; s < subjects_per_class; ++s) {
      const bool tv_informative = s < subjects_per_class / 2;
      for (std::size_t k = 0; k < segments_per_subject; ++k) {
        auto draw = [&](bool informative) {
          const double level = informative ? 1.5 * sign : 0.0;
          return std::vector<double>{level + 0.3 * rng.normal(), level + 0.3 * rng.normal()};
        };
        out[Modality::TV].push_back(
            instance(draw(tv_informative), subject_name(label, s), label, Modality::TV, segment_name(k)));
        out[Modality::FAU].push_back(
            instance(draw(!tv_informative), subject_name(label, s), label, Modality::FAU, segment_name(k)));
      }
    }
  }
  return out;
}

ModalityDatasets redundant_cohort(std::uint64_t seed, std::size_t subjects_per_class,
                                  std::size_t segments_per_subject) {
  ModalityDatasets out;
  out[Modality::TV] = noisy_cohort(subjects_per_class, segments_per_subject, seed, 2.0, Modality::TV);
  out[Modality::FAU] = out[Modality::TV];
  for (auto& f : out[Modality::FAU]) f.modality = Modality::FAU;
  return out;
}

std::vector<FeatureInstance> cohort_features(const std::vector<SubjectRecording>& cohort,
                                             const ModalityPreset& preset) {
  std::vector<FeatureInstance> out;
  for (const auto& rec : cohort) {
    for (const auto& seg : extract_segments(rec.signals, rec.manifest, rec.subject_id)) {
      const auto corr = channel_delay_correlation(seg, preset.embedding);
      const auto spectrum = normalize(eigenspectrum(corr));
      out.push_back(pool_features(spectrum, preset.ranges, rec.subject_id, rec.label,
                                  preset.modality, seg.id()));
    }
  }
  return out;
}

std::vector<SubjectRecording> small_cohort(Modality modality, std::size_t rank_sz,
                                           std::size_t rank_hc, std::size_t subjects_per_class,
                                           std::uint64_t seed) {
  const auto& preset = modality == Modality::FAU ? fau_preset() : tv_preset();
  SynthSpec tmpl;
  tmpl.channels = preset.channels;
  tmpl.sample_rate_hz = preset.sample_rate_hz;
  tmpl.modality = modality;
  ClassSpec sz{Label::SZ, subjects_per_class, tmpl};
  sz.tmpl.latent_rank = rank_sz;
  ClassSpec hc{Label::HC, subjects_per_class, tmpl};
  hc.tmpl.latent_rank = rank_hc;
  CohortOptions options;
  options.seed = seed;
  return generate_cohort({sz, hc}, options);
}

}  // namespace tdec::fixture
