#include "tdec/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tdec/error.hpp"

namespace tdec {

namespace {

std::string key_of(const FeatureInstance& inst) { return inst.subject_id + "/" + inst.segment_id; }

const SvmParams& params_for(const ModalityParams& params, Modality m) {
  const auto it = params.find(m);
  if (it == params.end())
    throw ValueError("no SVM parameters for modality " + std::string(to_string(m)));
  return it->second;
}

}  // namespace

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::pair<std::vector<double>, double> fit_logistic(const Matrix& x, std::span<const double> targets,
                                                    const LogisticOptions& options) {
  const std::size_t n = x.rows();
  const std::size_t dim = x.cols();
  if (targets.size() != n || n == 0) throw ValueError("logistic regression needs matching rows");
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> grad(dim);
  for (std::size_t it = 0; it < options.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      double z = b;
      for (std::size_t d = 0; d < dim; ++d) z += w[d] * row[d];
      const double r = logistic(z) - targets[i];
      for (std::size_t d = 0; d < dim; ++d) grad[d] += r * row[d];
      grad_b += r;
    }
    for (double& g : grad) g /= static_cast<double>(n);
    grad_b /= static_cast<double>(n);
    double norm2 = grad_b * grad_b;
    for (double g : grad) norm2 += g * g;
    if (std::sqrt(norm2) < options.gradient_tolerance) break;
    for (std::size_t d = 0; d < dim; ++d) w[d] -= options.learning_rate * grad[d];
    b -= options.learning_rate * grad_b;
  }
  return {std::move(w), b};
}

double meta_score(const MetaModel& meta, const std::map<Modality, double>& decisions) {
  double z = meta.intercept;
  for (const auto& [modality, weight] : meta.weights) {
    const auto it = decisions.find(modality);
    if (it == decisions.end())
      throw ValueError("missing decision value for modality " + std::string(to_string(modality)));
    z += weight * it->second;
  }
  return logistic(z);
}

ModalityDatasets align(const ModalityDatasets& datasets) {
  if (datasets.size() < 2) throw ValueError("stacking needs at least two modalities");

  std::set<std::string> all_keys;
  std::map<Modality, std::map<std::string, const FeatureInstance*>> by_key;
  for (const auto& [modality, instances] : datasets) {
    auto& index = by_key[modality];
    for (const auto& inst : instances) {
      if (!index.emplace(key_of(inst), &inst).second)
        throw ValueError("duplicate instance key " + key_of(inst) + " in modality " +
                         std::string(to_string(modality)));
      all_keys.insert(key_of(inst));
    }
  }

  std::vector<std::string> missing;
  for (const auto& key : all_keys)
    for (const auto& [modality, index] : by_key)
      if (!index.contains(key)) missing.push_back(std::string(to_string(modality)) + ":" + key);
  if (!missing.empty()) throw AlignmentError(std::move(missing));

  ModalityDatasets out;
  for (const auto& key : all_keys) {
    const Label label = by_key.begin()->second.at(key)->label;
    for (const auto& [modality, index] : by_key) {
      const FeatureInstance* inst = index.at(key);
      if (inst->label != label) throw AlignmentError({key + " (label differs across modalities)"});
      out[modality].push_back(*inst);
    }
  }
  return out;
}

namespace {

// Assumes aligned input: the i-th instance of every modality shares a key.
StackingModel stack_train_aligned(const ModalityDatasets& aligned, const ModalityParams& params,
                                  const LogisticOptions& meta_options) {
  const auto& reference = aligned.begin()->second;
  const auto [positive, negative] = binary_labels(reference);
  const auto subjects = subjects_of(reference);
  const std::size_t n = reference.size();
  const std::size_t num_modalities = aligned.size();

  // Out-of-fold base decisions: a row's meta-features come from base models
  // that never saw that row's subject.
  Matrix meta_x(n, num_modalities);
  for (const auto& subject : subjects) {
    std::size_t column = 0;
    for (const auto& [modality, instances] : aligned) {
      std::vector<FeatureInstance> train;
      std::vector<std::size_t> held;
      for (std::size_t i = 0; i < n; ++i) {
        if (instances[i].subject_id == subject)
          held.push_back(i);
        else
          train.push_back(instances[i]);
      }
      std::set<Label> labels;
      for (const auto& inst : train) labels.insert(inst.label);
      if (labels.size() < 2) throw FoldError(subject);
      const SvmModel base = fit_svm(train, params_for(params, modality));
      for (std::size_t i : held) meta_x(i, column) = svm_decision(base, instances[i].features);
      ++column;
    }
  }

  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = reference[i].label == positive ? 1.0 : 0.0;
  auto [weights, intercept] = fit_logistic(meta_x, targets, meta_options);

  StackingModel model;
  model.positive = positive;
  model.negative = negative;
  model.meta.intercept = intercept;
  std::size_t column = 0;
  for (const auto& [modality, instances] : aligned) {
    model.base_models.emplace(modality, fit_svm(instances, params_for(params, modality)));
    model.meta.weights[modality] = weights[column++];
  }
  return model;
}

ModalityParams broadcast(const ModalityDatasets& datasets, const SvmParams& params) {
  ModalityParams out;
  for (const auto& [modality, unused] : datasets) out[modality] = params;
  return out;
}

}  // namespace

StackingModel stack_train(const ModalityDatasets& datasets, const ModalityParams& params,
                          const LogisticOptions& meta_options) {
  return stack_train_aligned(align(datasets), params, meta_options);
}

StackingModel stack_train(const ModalityDatasets& datasets, const SvmParams& params) {
  return stack_train(datasets, broadcast(datasets, params));
}

std::pair<Label, double> stack_predict(const StackingModel& model,
                                       const std::map<Modality, std::vector<double>>& features) {
  std::map<Modality, double> decisions;
  for (const auto& [modality, base] : model.base_models) {
    const auto it = features.find(modality);
    if (it == features.end())
      throw ValueError("missing features for modality " + std::string(to_string(modality)));
    decisions[modality] = svm_decision(base, it->second);
  }
  const double score = meta_score(model.meta, decisions);
  return {score >= 0.5 ? model.positive : model.negative, score};
}

CvReport fused_loso_cv(const ModalityDatasets& datasets, const ModalityParams& params) {
  const auto aligned = align(datasets);
  const auto& reference = aligned.begin()->second;
  binary_labels(reference);
  const auto subjects = subjects_of(reference);
  if (subjects.size() < 2) throw ValueError("leave-one-subject-out needs at least two subjects");

  CvReport report;
  for (const auto& held_out : subjects) {
    ModalityDatasets train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      if (reference[i].subject_id == held_out) {
        test.push_back(i);
        continue;
      }
      for (const auto& [modality, instances] : aligned) train[modality].push_back(instances[i]);
    }
    std::set<Label> labels;
    for (const auto& inst : train.begin()->second) labels.insert(inst.label);
    if (labels.size() < 2) throw FoldError(held_out);

    const StackingModel model = stack_train_aligned(train, params, {});
    FoldResult fold;
    fold.held_out_subject = held_out;
    std::size_t correct = 0;
    for (std::size_t i : test) {
      std::map<Modality, std::vector<double>> features;
      for (const auto& [modality, instances] : aligned) features[modality] = instances[i].features;
      const auto [pred, score] = stack_predict(model, features);
      correct += pred == reference[i].label;
      fold.predictions.push_back({reference[i].segment_id, reference[i].label, pred, score});
    }
    fold.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    for (const auto& [modality, base] : model.base_models) fold.converged &= base.converged;
    report.folds.push_back(std::move(fold));
  }
  summarize(report);
  return report;
}

CvReport fused_loso_cv(const ModalityDatasets& datasets, const SvmParams& params) {
  return fused_loso_cv(datasets, broadcast(datasets, params));
}

}  // namespace tdec
