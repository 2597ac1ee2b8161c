#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tdec/matrix.hpp"
#include "tdec/spectrum.hpp"
#include "tdec/types.hpp"

namespace tdec {

struct SvmParams {
  double c = 1.0;
  std::optional<double> gamma;  // nullopt = AUTO: 1 / (num_features * mean feature variance)
  double kkt_tol = 1e-3;
  std::size_t max_passes = 200;  // iteration cap is max_passes * training-set size

  void validate() const;
};

// Per-feature affine map to zero mean and unit (population) variance.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer identity(std::size_t dim);
  std::size_t dim() const noexcept { return mean.size(); }
  std::vector<double> apply(std::span<const double> x) const;
};

Standardizer standardize_fit(std::span<const FeatureInstance> instances);
std::vector<FeatureInstance> standardize_apply(const Standardizer& s,
                                               std::span<const FeatureInstance> instances);

// Raw SMO solution of the soft-margin dual
//   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij   s.t. 0 <= a_i <= c, sum a_i y_i = 0
// with an RBF kernel. Labels are +1/-1.
struct SmoSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  double objective = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

SmoSolution smo_solve(const Matrix& x, std::span<const double> y, double c, double gamma,
                      double kkt_tol, std::size_t max_iterations);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);
double auto_gamma(const Matrix& x);

struct SvmModel {
  Matrix support_vectors;                // standardized feature space
  std::vector<double> dual_coefficients;  // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
  Standardizer standardizer;
  SvmParams params;
  bool converged = true;
  Label positive = Label::SZ;  // decision > 0
  Label negative = Label::HC;

  std::size_t dim() const noexcept { return standardizer.dim(); }
  friend bool operator==(const SvmModel&, const SvmModel&);
};

// The two labels present, positive first. Throws ValueError unless exactly two.
std::pair<Label, Label> binary_labels(std::span<const FeatureInstance> instances);

// Trains on already-standardized instances; `applied` is recorded in the model
// so that svm_decision can take raw feature vectors.
SvmModel svm_train(std::span<const FeatureInstance> standardized, const SvmParams& params,
                   Standardizer applied);

// Fits the standardizer on `raw`, then trains.
SvmModel fit_svm(std::span<const FeatureInstance> raw, const SvmParams& params);

// Signed decision value for a raw (unstandardized) feature vector.
double svm_decision(const SvmModel& model, std::span<const double> x);
Label svm_predict(const SvmModel& model, std::span<const double> x);

}  // namespace tdec
