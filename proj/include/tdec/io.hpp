#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tdec/cv.hpp"
#include "tdec/embedding.hpp"
#include "tdec/fusion.hpp"
#include "tdec/spectrum.hpp"
#include "tdec/svm.hpp"

namespace tdec::io {

std::string read_text_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Correlation matrices: row-major CSV plus a JSON sidecar.
std::string write_matrix_csv(const Matrix& m);
Matrix parse_matrix_csv(std::string_view text);

struct MatrixSidecar {
  std::vector<std::string> channel_names;
  EmbeddingConfig config;
  double sample_rate_hz = 0.0;
  std::string segment_id;
  std::string subject_id;
  Modality modality = Modality::OTHER;
};
std::string write_sidecar(const MatrixSidecar& sidecar);
MatrixSidecar parse_sidecar(std::string_view json_text);

// Spectrum CSV: segment_id,subject_id,label,modality,e0..e{dim-1} (raw eigenvalues).
struct SpectrumRecord {
  std::string segment_id;
  std::string subject_id;
  Label label = Label::HC;
  Modality modality = Modality::OTHER;
  Eigenspectrum spectrum;
};
std::string write_spectrum_csv(std::span<const SpectrumRecord> records);
std::vector<SpectrumRecord> parse_spectrum_csv(std::string_view text);

// Feature CSV: subject_id,label,modality,segment_id,f0..fk.
std::string write_feature_csv(std::span<const FeatureInstance> instances);
std::vector<FeatureInstance> parse_feature_csv(std::string_view text);

// Label file: subject_id,label.
std::string write_labels_csv(const std::map<std::string, Label>& labels);
std::map<std::string, Label> parse_labels_csv(std::string_view text);

nlohmann::json to_json(const SvmModel& model);
SvmModel svm_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StackingModel& model);
StackingModel stacking_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CvReport& report);

// Two-space indented dump with a trailing newline. Keys are sorted.
std::string dump(const nlohmann::json& j);

}  // namespace tdec::io
