#include "tdec/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tdec/error.hpp"
#include "tdec/format.hpp"
#include "tdec/simd/kernels.hpp"

namespace tdec {

void SvmParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValueError("SVM box constraint c must be positive");
  if (gamma && (!(*gamma > 0.0) || !std::isfinite(*gamma)))
    throw ValueError("RBF gamma must be positive");
  if (!(kkt_tol > 0.0)) throw ValueError("KKT tolerance must be positive");
  if (max_passes < 1) throw ValueError("max_passes must be at least 1");
}

Standardizer Standardizer::identity(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  if (x.size() != dim())
    throw ValueError("feature vector has " + std::to_string(x.size()) + " entries, expected " +
                     std::to_string(dim()));
  std::vector<double> out(x.size());
  for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - mean[f]) / stddev[f];
  return out;
}

Standardizer standardize_fit(std::span<const FeatureInstance> instances) {
  if (instances.size() < 2) throw ValueError("standardization needs at least two instances");
  const std::size_t dim = instances.front().features.size();
  for (const auto& inst : instances)
    if (inst.features.size() != dim) throw ValueError("instances have differing feature counts");

  Standardizer s{std::vector<double>(dim), std::vector<double>(dim)};
  const double n = static_cast<double>(instances.size());
  for (std::size_t f = 0; f < dim; ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double total = 0.0;
    for (const auto& inst : instances) {
      const double v = inst.features[f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      total += v;
    }
    if (lo == hi) throw DegenerateFeatureError(f);
    const double mean = total / n;
    double ss = 0.0;
    for (const auto& inst : instances) {
      const double d = inst.features[f] - mean;
      ss += d * d;
    }
    s.mean[f] = mean;
    s.stddev[f] = std::sqrt(ss / n);
  }
  return s;
}

std::vector<FeatureInstance> standardize_apply(const Standardizer& s,
                                               std::span<const FeatureInstance> instances) {
  std::vector<FeatureInstance> out(instances.begin(), instances.end());
  for (auto& inst : out) inst.features = s.apply(inst.features);
  return out;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  return std::exp(-gamma * simd::squared_distance(a, b));
}

double auto_gamma(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t dim = x.cols();
  double var_total = 0.0;
  for (std::size_t f = 0; f < dim; ++f) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, f);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, f) - mean) * (x(i, f) - mean);
    var_total += ss / static_cast<double>(n);
  }
  const double mean_var = var_total / static_cast<double>(dim);
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(dim) * mean_var)
                        : 1.0 / static_cast<double>(dim);
}

namespace {

constexpr double kTau = 1e-12;  // floor on the pair curvature

// Bias-free decision values g_t = sum_s alpha_s y_s K_st.
std::vector<double> decision_without_bias(const Matrix& k, std::span<const double> alpha,
                                          std::span<const double> y) {
  const std::size_t n = alpha.size();
  std::vector<double> coef(n);
  for (std::size_t s = 0; s < n; ++s) coef[s] = alpha[s] * y[s];
  std::vector<double> g(n);
  for (std::size_t t = 0; t < n; ++t) g[t] = simd::dot(coef, k.row(t));
  return g;
}

}  // namespace

SmoSolution smo_solve(const Matrix& x, std::span<const double> y, double c, double gamma,
                      double kkt_tol, std::size_t max_iterations) {
  const std::size_t n = x.rows();
  if (y.size() != n) throw ValueError("label count does not match the number of points");

  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rbf_kernel(x.row(i), x.row(j), gamma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }

  SmoSolution sol;
  sol.alpha.assign(n, 0.0);
  auto& alpha = sol.alpha;
  std::vector<double> g(n, 0.0);

  // v_t = y_t - g_t is minus the (bias-free) error; the KKT conditions hold
  // within tol when max over I_up of v minus min over I_low of v is below tol.
  const auto in_up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < c : alpha[t] > 0; };
  const auto in_low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0 : alpha[t] < c; };
  const auto snap = [c](double a) {
    if (a < c * 1e-12) return 0.0;
    if (a > c * (1.0 - 1e-12)) return c;
    return a;
  };

  // Joint update of (alpha_i, alpha_j) along the equality constraint.
  // Returns false when the clipped step is zero.
  const auto take_step = [&](std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double ai = alpha[i], aj = alpha[j];
    const double yi = y[i], yj = y[j];
    double lo, hi;
    if (yi != yj) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c, c + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c);
      hi = std::min(c, ai + aj);
    }
    if (!(hi > lo)) return false;
    const double eta = std::max(k(i, i) + k(j, j) - 2.0 * k(i, j), kTau);
    const double ei = g[i] - yi;
    const double ej = g[j] - yj;
    const double aj_new = snap(std::clamp(aj + yj * (ei - ej) / eta, lo, hi));
    const double dj = aj_new - aj;
    if (std::abs(dj) <= 1e-15 * (c + std::abs(aj))) return false;
    const double ai_new = snap(ai - yi * yj * dj);
    const double di = ai_new - ai;
    alpha[i] = ai_new;
    alpha[j] = aj_new;
    const auto ki = k.row(i);
    const auto kj = k.row(j);
    const double wi = yi * di, wj = yj * dj;
    for (std::size_t t = 0; t < n; ++t) g[t] += wi * ki[t] + wj * kj[t];
    return true;
  };

  std::vector<std::size_t> order(n);
  while (sol.iterations < max_iterations) {
    std::size_t i = n;
    double v_max = -std::numeric_limits<double>::infinity();
    double v_min = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = y[t] - g[t];
      if (in_up(t) && v > v_max) {
        v_max = v;
        i = t;
      }
      if (in_low(t) && v < v_min) {
        v_min = v;
        j = t;
      }
    }
    if (i == n || j == n || v_max - v_min < kkt_tol) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;
    // Second choice maximizes |E_i - E_j|; if that pair cannot move, fall back
    // to every other violating partner in order of decreasing |E_i - E_j|.
    if (take_step(i, j)) continue;
    order.clear();
    for (std::size_t t = 0; t < n; ++t)
      if (t != i && t != j && in_low(t) && y[t] - g[t] < v_max) order.push_back(t);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] - g[a] < y[b] - g[b]; });
    bool moved = false;
    for (std::size_t t : order)
      if ((moved = take_step(i, t))) break;
    if (!moved) break;
  }

  g = decision_without_bias(k, alpha, y);
  double free_total = 0.0;
  std::size_t free_count = 0;
  double up_max = -std::numeric_limits<double>::infinity();
  double low_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = y[t] - g[t];
    if (alpha[t] > 0.0 && alpha[t] < c) {
      free_total += v;
      ++free_count;
    }
    if (in_up(t)) up_max = std::max(up_max, v);
    if (in_low(t)) low_min = std::min(low_min, v);
  }
  if (free_count > 0) {
    sol.bias = free_total / static_cast<double>(free_count);
  } else if (std::isfinite(up_max) && std::isfinite(low_min)) {
    sol.bias = 0.5 * (up_max + low_min);
  } else {
    sol.bias = std::isfinite(up_max) ? up_max : low_min;
  }

  double linear = 0.0, quad = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    linear += alpha[t];
    quad += alpha[t] * y[t] * g[t];
  }
  sol.objective = linear - 0.5 * quad;
  return sol;
}

std::pair<Label, Label> binary_labels(std::span<const FeatureInstance> instances) {
  std::set<Label> labels;
  for (const auto& inst : instances) labels.insert(inst.label);
  if (labels.size() < 2) throw ValueError("training data contains a single class");
  if (labels.size() > 2) throw ValueError("only binary classification is supported");
  return {*labels.begin(), *labels.rbegin()};
}

SvmModel svm_train(std::span<const FeatureInstance> standardized, const SvmParams& params,
                   Standardizer applied) {
  params.validate();
  if (standardized.empty()) throw ValueError("no training instances");
  const auto [positive, negative] = binary_labels(standardized);
  const std::size_t n = standardized.size();
  const std::size_t dim = standardized.front().features.size();
  if (applied.dim() != dim) throw ValueError("standardizer dimension does not match features");

  Matrix x(n, dim);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = standardized[i].features;
    if (f.size() != dim) throw ValueError("instances have differing feature counts");
    for (std::size_t d = 0; d < dim; ++d) {
      if (!std::isfinite(f[d])) throw ValueError("non-finite feature value");
      x(i, d) = f[d];
    }
    y[i] = standardized[i].label == positive ? 1.0 : -1.0;
  }

  const double gamma = params.gamma ? *params.gamma : auto_gamma(x);
  const auto sol = smo_solve(x, y, params.c, gamma, params.kkt_tol, params.max_passes * n);

  SvmModel model;
  std::size_t nsv = 0;
  for (double a : sol.alpha) nsv += a > 0.0;
  model.support_vectors = Matrix(nsv, dim);
  for (std::size_t i = 0, r = 0; i < n; ++i) {
    if (!(sol.alpha[i] > 0.0)) continue;
    std::copy(x.row(i).begin(), x.row(i).end(), model.support_vectors.row(r).begin());
    model.dual_coefficients.push_back(sol.alpha[i] * y[i]);
    ++r;
  }
  model.bias = sol.bias;
  model.gamma = gamma;
  model.standardizer = std::move(applied);
  model.params = params;
  model.converged = sol.converged;
  model.positive = positive;
  model.negative = negative;
  return model;
}

SvmModel fit_svm(std::span<const FeatureInstance> raw, const SvmParams& params) {
  auto s = standardize_fit(raw);
  const auto z = standardize_apply(s, raw);
  return svm_train(z, params, std::move(s));
}

double svm_decision(const SvmModel& model, std::span<const double> x) {
  const auto z = model.standardizer.apply(x);
  double out = model.bias;
  for (std::size_t i = 0; i < model.dual_coefficients.size(); ++i)
    out += model.dual_coefficients[i] * rbf_kernel(model.support_vectors.row(i), z, model.gamma);
  return out;
}

Label svm_predict(const SvmModel& model, std::span<const double> x) {
  return svm_decision(model, x) >= 0.0 ? model.positive : model.negative;
}

bool operator==(const SvmModel& a, const SvmModel& b) {
  return a.support_vectors == b.support_vectors && a.dual_coefficients == b.dual_coefficients &&
         a.bias == b.bias && a.gamma == b.gamma && a.standardizer.mean == b.standardizer.mean &&
         a.standardizer.stddev == b.standardizer.stddev && a.converged == b.converged &&
         a.positive == b.positive && a.negative == b.negative;
}

}  // namespace tdec
