#include "tdec/cv.hpp"

#include <set>

#include "tdec/error.hpp"

namespace tdec {

Metrics metrics(std::span<const Label> predictions, std::span<const Label> labels) {
  if (predictions.size() != labels.size())
    throw ValueError("prediction and label counts differ");
  if (predictions.empty()) throw ValueError("metrics need at least one prediction");

  std::set<Label> classes(labels.begin(), labels.end());
  classes.insert(predictions.begin(), predictions.end());

  Metrics m;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  m.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());

  for (Label cls : classes) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool pred = predictions[i] == cls;
      const bool truth = labels[i] == cls;
      tp += pred && truth;
      fp += pred && !truth;
      fn += !pred && truth;
    }
    const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1[cls] = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return m;
}

std::vector<std::string> subjects_of(std::span<const FeatureInstance> instances) {
  std::set<std::string> ids;
  for (const auto& inst : instances) ids.insert(inst.subject_id);
  return {ids.begin(), ids.end()};
}

void summarize(CvReport& report) {
  std::vector<Label> preds, truth;
  double total = 0.0;
  report.convergence_warnings = 0;
  for (const auto& fold : report.folds) {
    total += fold.accuracy;
    report.convergence_warnings += !fold.converged;
    for (const auto& p : fold.predictions) {
      preds.push_back(p.predicted);
      truth.push_back(p.truth);
    }
  }
  report.mean_accuracy = report.folds.empty() ? 0.0 : total / static_cast<double>(report.folds.size());
  report.f1_per_class = preds.empty() ? std::map<Label, double>{} : metrics(preds, truth).f1;
}

CvReport loso_cv(std::span<const FeatureInstance> instances, const SvmParams& params,
                 StandardizeScope scope) {
  params.validate();
  const auto subjects = subjects_of(instances);
  if (subjects.size() < 2) throw ValueError("leave-one-subject-out needs at least two subjects");
  binary_labels(instances);

  std::optional<Standardizer> global;
  std::vector<FeatureInstance> global_z;
  if (scope == StandardizeScope::AllInstances) {
    global = standardize_fit(instances);
    global_z = standardize_apply(*global, instances);
  }

  CvReport report;
  for (const auto& held_out : subjects) {
    std::vector<FeatureInstance> train, test;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const auto& inst = global ? global_z[i] : instances[i];
      (inst.subject_id == held_out ? test : train).push_back(inst);
    }
    std::set<Label> train_labels;
    for (const auto& inst : train) train_labels.insert(inst.label);
    if (train_labels.size() < 2) throw FoldError(held_out);

    SvmModel model = global ? svm_train(train, params, Standardizer::identity(global->dim()))
                            : fit_svm(train, params);

    FoldResult fold;
    fold.held_out_subject = held_out;
    std::size_t correct = 0;
    for (const auto& inst : test) {
      const double d = svm_decision(model, inst.features);
      const Label pred = d >= 0.0 ? model.positive : model.negative;
      correct += pred == inst.label;
      fold.predictions.push_back({inst.segment_id, inst.label, pred, d});
    }
    fold.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    fold.converged = model.converged;
    fold.model = std::move(model);
    report.folds.push_back(std::move(fold));
  }
  summarize(report);
  return report;
}

}  // namespace tdec
