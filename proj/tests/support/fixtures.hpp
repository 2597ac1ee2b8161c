#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tdec/fusion.hpp"
#include "tdec/presets.hpp"
#include "tdec/synth.hpp"

namespace tdec::fixture {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

FeatureInstance instance(std::vector<double> features, std::string subject, Label label,
                         Modality modality, std::string segment);

// Two well separated Gaussian clusters in `dim` features, one per class.
std::vector<FeatureInstance> separable_cohort(std::size_t subjects_per_class,
                                              std::size_t segments_per_subject, std::uint64_t seed,
                                              Modality modality = Modality::TV, std::size_t dim = 2);

// Subjects with a class-dependent offset that overlaps between classes.
std::vector<FeatureInstance> noisy_cohort(std::size_t subjects_per_class,
                                          std::size_t segments_per_subject, std::uint64_t seed,
                                          double separation, Modality modality = Modality::TV);

// Half the subjects of each class carry the class signal only in TV
// features, the other half only in FAU features; the other modality is noise.
ModalityDatasets complementary_cohort(std::uint64_t seed, std::size_t subjects_per_class = 6,
                                      std::size_t segments_per_subject = 4);

// TV and FAU carry the same information (FAU features are copies of TV).
ModalityDatasets redundant_cohort(std::uint64_t seed, std::size_t subjects_per_class = 6,
                                  std::size_t segments_per_subject = 4);

// Runs segments -> correlation -> spectrum -> pooled features for every
// subject recording, using the preset's embedding and ranges.
std::vector<FeatureInstance> cohort_features(const std::vector<SubjectRecording>& cohort,
                                             const ModalityPreset& preset);

std::vector<SubjectRecording> small_cohort(Modality modality, std::size_t rank_sz,
                                           std::size_t rank_hc, std::size_t subjects_per_class,
                                           std::uint64_t seed);

}  // namespace tdec::fixture
