#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tdec/ingest.hpp"
#include "tdec/matrix.hpp"

namespace tdec {

struct EmbeddingConfig {
  std::size_t delay_scale = 1;  // samples between successive delayed copies
  std::size_t num_delays = 1;   // copies per channel, lag 0 included

  // Span of lags covered by one embedded row.
  std::size_t window() const noexcept { return (num_delays - 1) * delay_scale; }
  // Shortest segment yielding at least two embedded rows.
  std::size_t min_length() const noexcept { return window() + 2; }
  void validate() const;
};

// Pearson correlation matrix of the time-delay embedded channels.
struct CorrelationMatrix {
  Matrix values;
  EmbeddingConfig config;
  std::size_t channel_count = 0;
  double sample_rate_hz = 0.0;
  std::vector<std::string> channel_names;

  std::size_t dim() const noexcept { return values.rows(); }
};

// Embedded ensemble: rows are valid time points, column c*num_delays + k holds
// channel c lagged by k*delay_scale samples. Row t corresponds to segment time
// t + window(), so every lag looks into the past of the same instant.
Matrix embed(const Segment& segment, const EmbeddingConfig& config);

CorrelationMatrix channel_delay_correlation(const Segment& segment, const EmbeddingConfig& config);

}  // namespace tdec
