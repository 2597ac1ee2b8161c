#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdec/embedding.hpp"
#include "tdec/types.hpp"

namespace tdec {

// Eigenvalues sorted non-increasing. Raw spectra of correlation matrices sum
// to the matrix dimension; normalized spectra sum to one.
struct Eigenspectrum {
  std::vector<double> values;
  bool normalized = false;

  std::size_t dim() const noexcept { return values.size(); }
};

// Closed interval of normalized rank positions j/(dim-1).
struct IndexRange {
  double lo = 0.0;
  double hi = 1.0;
  void validate() const;
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct FeatureInstance {
  std::vector<double> features;
  std::string subject_id;
  Label label = Label::HC;
  Modality modality = Modality::OTHER;
  std::string segment_id;
};

// Throws ValueError if the values are unsorted, negative, or (when normalized)
// do not sum to one within 1e-9.
void validate(const Eigenspectrum& spectrum);

// Eigenvalues below zero but above -1e-8 are clamped to zero; anything more
// negative means the input was not positive semidefinite (NumericalError).
Eigenspectrum eigenspectrum(const CorrelationMatrix& m);
Eigenspectrum eigenspectrum(const Matrix& symmetric_psd);

Eigenspectrum normalize(const Eigenspectrum& raw);

// Element-wise mean in the linear domain.
Eigenspectrum average_spectra(std::span<const Eigenspectrum> spectra);

// 0-based indices j with lo <= j/(dim-1) <= hi. dim == 1 maps index 0 to 0.
std::vector<std::size_t> selected_indices(std::size_t dim, const IndexRange& range);

FeatureInstance pool_features(const Eigenspectrum& normalized, std::span<const IndexRange> ranges,
                              std::string subject_id, Label label, Modality modality,
                              std::string segment_id);

inline constexpr double kLogFloor = 1e-12;

// log10(group) - log10(reference) per index for every non-reference group.
std::map<std::string, std::vector<double>> difference_curves(
    const std::map<std::string, Eigenspectrum>& group_means, const std::string& reference);

// A normalized segment spectrum tagged with its subject and group.
struct LabeledSpectrum {
  std::string subject_id;
  std::string group;
  Eigenspectrum spectrum;
};

// Segment spectra are averaged per subject, then subject means per group.
std::map<std::string, Eigenspectrum> group_means(std::span<const LabeledSpectrum> spectra);

}  // namespace tdec
