#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "tdec/cv.hpp"
#include "tdec/svm.hpp"

namespace tdec {

// Logistic regression over base-model decision values.
struct MetaModel {
  std::map<Modality, double> weights;
  double intercept = 0.0;
};

struct StackingModel {
  std::map<Modality, SvmModel> base_models;
  MetaModel meta;
  Label positive = Label::SZ;
  Label negative = Label::HC;
};

using ModalityDatasets = std::map<Modality, std::vector<FeatureInstance>>;
using ModalityParams = std::map<Modality, SvmParams>;

struct LogisticOptions {
  double learning_rate = 0.1;
  std::size_t iterations = 5000;
  double gradient_tolerance = 1e-8;
};

double logistic(double z);

// Batch gradient descent on the mean log-loss; rows of `x` are meta-features,
// targets are 0/1.
std::pair<std::vector<double>, double> fit_logistic(const Matrix& x, std::span<const double> targets,
                                                    const LogisticOptions& options = {});

// logistic(sum_m w_m * d_m + intercept).
double meta_score(const MetaModel& meta, const std::map<Modality, double>& decisions);

// Instances of every modality, re-ordered by (subject_id, segment_id) and
// checked for matching key sets and labels. Throws AlignmentError.
ModalityDatasets align(const ModalityDatasets& datasets);

StackingModel stack_train(const ModalityDatasets& datasets, const ModalityParams& params,
                          const LogisticOptions& meta_options = {});
StackingModel stack_train(const ModalityDatasets& datasets, const SvmParams& params = {});

// Raw feature vectors per modality -> (label, fused score in [0, 1]).
std::pair<Label, double> stack_predict(const StackingModel& model,
                                       const std::map<Modality, std::vector<double>>& features);

CvReport fused_loso_cv(const ModalityDatasets& datasets, const ModalityParams& params);
CvReport fused_loso_cv(const ModalityDatasets& datasets, const SvmParams& params = {});

}  // namespace tdec
