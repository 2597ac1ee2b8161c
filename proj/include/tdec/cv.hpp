#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdec/svm.hpp"

namespace tdec {

struct Metrics {
  double accuracy = 0.0;
  std::map<Label, double> f1;  // one entry per label seen in predictions or truth
};

Metrics metrics(std::span<const Label> predictions, std::span<const Label> labels);

struct Prediction {
  std::string segment_id;
  Label truth = Label::HC;
  Label predicted = Label::HC;
  double score = 0.0;  // SVM decision value, or fused probability
};

struct FoldResult {
  std::string held_out_subject;
  std::vector<Prediction> predictions;
  double accuracy = 0.0;
  bool converged = true;
  std::optional<SvmModel> model;  // single-modality folds only
};

struct CvReport {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  std::map<Label, double> f1_per_class;
  std::size_t convergence_warnings = 0;
};

// Literal "standardize across all instances" reproduces a protocol that lets
// held-out statistics into training; PerFold is the default.
enum class StandardizeScope { PerFold, AllInstances };

// Distinct subject ids in sorted order.
std::vector<std::string> subjects_of(std::span<const FeatureInstance> instances);

CvReport loso_cv(std::span<const FeatureInstance> instances, const SvmParams& params,
                 StandardizeScope scope = StandardizeScope::PerFold);

// Fills mean_accuracy and f1_per_class from the folds.
void summarize(CvReport& report);

}  // namespace tdec
