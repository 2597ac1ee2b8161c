#include "tdec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tdec/error.hpp"
#include "tdec/format.hpp"
#include "tdec/jacobi.hpp"

namespace tdec {

namespace {

constexpr double kPsdTolerance = 1e-8;

std::string describe(const IndexRange& r) {
  return "[" + format_g12(r.lo) + ", " + format_g12(r.hi) + "]";
}

}  // namespace

void IndexRange::validate() const {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
    throw ValueError("index range " + describe(*this) + " must satisfy 0 <= lo <= hi <= 1");
}

void validate(const Eigenspectrum& spectrum) {
  const auto& v = spectrum.values;
  if (v.empty()) throw ValueError("eigenspectrum is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0)
      throw ValueError("eigenvalue " + std::to_string(i) + " is negative or non-finite");
    if (i > 0 && v[i] > v[i - 1])
      throw ValueError("eigenspectrum is not sorted in descending order at index " +
                       std::to_string(i));
  }
  if (spectrum.normalized) {
    double total = 0.0;
    for (double x : v) total += x;
    if (std::abs(total - 1.0) > 1e-9 || v.front() > 1.0)
      throw ValueError("normalized eigenspectrum sums to " + format_g12(total));
  }
}

Eigenspectrum eigenspectrum(const Matrix& symmetric_psd) {
  auto values = jacobi_eigenvalues(symmetric_psd).eigenvalues;
  std::sort(values.begin(), values.end(), std::greater<>());
  for (double& x : values) {
    if (x < -kPsdTolerance)
      throw NumericalError("matrix is not positive semidefinite (eigenvalue " + format_g12(x) + ")");
    if (x < 0.0) x = 0.0;
  }
  return {std::move(values), false};
}

Eigenspectrum eigenspectrum(const CorrelationMatrix& m) { return eigenspectrum(m.values); }

Eigenspectrum normalize(const Eigenspectrum& raw) {
  validate(raw);
  double total = 0.0;
  for (double x : raw.values) total += x;
  if (!(total > 0.0)) throw ValueError("cannot normalize an eigenspectrum with nonpositive sum");
  Eigenspectrum out{raw.values, true};
  for (double& x : out.values) x /= total;
  return out;
}

Eigenspectrum average_spectra(std::span<const Eigenspectrum> spectra) {
  if (spectra.empty()) throw ValueError("cannot average an empty list of spectra");
  const std::size_t dim = spectra.front().dim();
  const bool normalized = spectra.front().normalized;
  for (const auto& s : spectra) {
    validate(s);
    if (s.dim() != dim) throw ValueError("cannot average spectra of different dimensions");
    if (s.normalized != normalized)
      throw ValueError("cannot average normalized and raw spectra together");
  }
  // Mean as offsets from the first spectrum so that identical inputs
  // reproduce it exactly.
  const auto& first = spectra.front().values;
  Eigenspectrum out{first, normalized};
  const double n = static_cast<double>(spectra.size());
  for (std::size_t j = 0; j < dim; ++j) {
    double offset = 0.0;
    for (const auto& s : spectra) offset += s.values[j] - first[j];
    out.values[j] += offset / n;
  }
  // Rounding can leave adjacent ties out of order by an ulp.
  for (std::size_t j = 1; j < dim; ++j) out.values[j] = std::min(out.values[j], out.values[j - 1]);
  return out;
}

std::vector<std::size_t> selected_indices(std::size_t dim, const IndexRange& range) {
  range.validate();
  std::vector<std::size_t> out;
  if (dim == 0) return out;
  const double denom = dim > 1 ? static_cast<double>(dim - 1) : 1.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double pos = static_cast<double>(j) / denom;
    if (range.lo <= pos && pos <= range.hi) out.push_back(j);
  }
  return out;
}

FeatureInstance pool_features(const Eigenspectrum& normalized, std::span<const IndexRange> ranges,
                              std::string subject_id, Label label, Modality modality,
                              std::string segment_id) {
  if (!normalized.normalized) throw ValueError("features are pooled from normalized spectra");
  validate(normalized);
  FeatureInstance out;
  out.features.reserve(ranges.size());
  for (const auto& range : ranges) {
    const auto idx = selected_indices(normalized.dim(), range);
    if (idx.empty())
      throw ValueError("index range " + describe(range) + " selects no eigenvalue of a " +
                       std::to_string(normalized.dim()) + "-dimensional spectrum");
    double total = 0.0;
    for (auto j : idx) total += normalized.values[j];
    out.features.push_back(total / static_cast<double>(idx.size()));
  }
  out.subject_id = std::move(subject_id);
  out.label = label;
  out.modality = modality;
  out.segment_id = std::move(segment_id);
  return out;
}

std::map<std::string, std::vector<double>> difference_curves(
    const std::map<std::string, Eigenspectrum>& group_means, const std::string& reference) {
  const auto ref = group_means.find(reference);
  if (ref == group_means.end()) throw ValueError("reference group '" + reference + "' is missing");
  const std::size_t dim = ref->second.dim();
  const auto log_floor = [](double x) { return std::log10(std::max(x, kLogFloor)); };

  std::map<std::string, std::vector<double>> out;
  for (const auto& [group, spectrum] : group_means) {
    if (group == reference) continue;
    if (spectrum.dim() != dim)
      throw ValueError("group '" + group + "' spectrum dimension differs from the reference");
    std::vector<double> diff(dim);
    for (std::size_t j = 0; j < dim; ++j)
      diff[j] = log_floor(spectrum.values[j]) - log_floor(ref->second.values[j]);
    out.emplace(group, std::move(diff));
  }
  return out;
}

std::map<std::string, Eigenspectrum> group_means(std::span<const LabeledSpectrum> spectra) {
  std::map<std::string, std::map<std::string, std::vector<Eigenspectrum>>> by_group;
  for (const auto& s : spectra) by_group[s.group][s.subject_id].push_back(s.spectrum);

  std::map<std::string, Eigenspectrum> out;
  for (const auto& [group, subjects] : by_group) {
    std::vector<Eigenspectrum> subject_means;
    for (const auto& [subject, segs] : subjects) subject_means.push_back(average_spectra(segs));
    out.emplace(group, average_spectra(subject_means));
  }
  return out;
}

}  // namespace tdec
