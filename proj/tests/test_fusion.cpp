#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "tdec/error.hpp"
#include "tdec/fusion.hpp"

using namespace tdec;

TEST_CASE("meta score formula and boundary convention") {
  MetaModel meta{{{Modality::TV, 1.0}, {Modality::FAU, 1.0}}, 0.0};
  CHECK(meta_score(meta, {{Modality::TV, 2.0}, {Modality::FAU, 2.0}}) == doctest::Approx(0.98201379).epsilon(1e-8));
  CHECK(meta_score(meta, {{Modality::TV, 0.0}, {Modality::FAU, 0.0}}) == 0.5);
}

TEST_CASE("stack_predict labels ties as the positive class") {
  const auto data = fixture::separable_cohort(3, 3, 1, Modality::TV);
  StackingModel model;
  model.base_models[Modality::TV] = fit_svm(data, {});
  model.meta = MetaModel{{{Modality::TV, 0.0}}, 0.0};
  const auto [label, score] = stack_predict(model, {{Modality::TV, {0.0, 0.0}}});
  CHECK(score == 0.5);
  CHECK(label == Label::SZ);
  CHECK_THROWS_AS(stack_predict(model, {{Modality::FAU, {0.0, 0.0}}}), ValueError);
}

TEST_CASE("logistic regression separates a 1-D threshold") {
  Matrix x(6, 1);
  const std::vector<double> t{0, 0, 0, 1, 1, 1};
  const double v[6] = {-3, -2, -0.5, 0.5, 2, 3};
  for (int i = 0; i < 6; ++i) x(i, 0) = v[i];
  const auto [w, b] = fit_logistic(x, t);
  CHECK(w[0] > 0.0);
  CHECK(logistic(w[0] * 0.5 + b) > 0.5);
  CHECK(logistic(w[0] * -0.5 + b) < 0.5);
}

TEST_CASE("alignment") {
  auto data = fixture::redundant_cohort(1, 3, 3);
  CHECK_NOTHROW(align(data));
  data[Modality::FAU].pop_back();
  try {
    align(data);
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(e.exit_code() == 3);
    CHECK(std::string(e.what()).find("seg2") != std::string::npos);
  }
  data = fixture::redundant_cohort(1, 3, 3);
  data[Modality::FAU][0].label = data[Modality::FAU][0].label == Label::SZ ? Label::HC : Label::SZ;
  CHECK_THROWS_AS(align(data), AlignmentError);
}

TEST_CASE("identical separable modalities fuse perfectly") {
  ModalityDatasets data;
  data[Modality::TV] = fixture::separable_cohort(6, 3, 4, Modality::TV);
  data[Modality::FAU] = fixture::separable_cohort(6, 3, 4, Modality::FAU);
  const auto report = fused_loso_cv(data);
  CHECK(report.folds.size() == 12);
  CHECK(report.mean_accuracy == 1.0);
}

TEST_CASE("complementary modalities fuse above either alone") {
  const auto data = fixture::complementary_cohort(7);
  const double tv = loso_cv(data.at(Modality::TV), {}).mean_accuracy;
  const double fau = loso_cv(data.at(Modality::FAU), {}).mean_accuracy;
  const auto fused = fused_loso_cv(data);
  CHECK(fused.folds.size() == 12);
  CHECK(fused.mean_accuracy > tv);
  CHECK(fused.mean_accuracy > fau);
}

TEST_CASE("stacking is deterministic") {
  const auto data = fixture::complementary_cohort(3);
  const auto a = stack_train(data);
  const auto b = stack_train(data);
  CHECK(a.meta.weights == b.meta.weights);
  CHECK(a.meta.intercept == b.meta.intercept);
  CHECK(a.base_models.at(Modality::TV) == b.base_models.at(Modality::TV));
}
