#include "tdec/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "tdec/error.hpp"
#include "tdec/simd/kernels.hpp"

namespace tdec {

void EmbeddingConfig::validate() const {
  if (delay_scale < 1) throw ValueError("delay scale must be at least 1");
  if (num_delays < 1) throw ValueError("number of delays must be at least 1");
}

namespace {

void check_length(const Segment& segment, const EmbeddingConfig& config) {
  config.validate();
  if (segment.length() < config.min_length())
    throw InsufficientLengthError(segment.length(), config.min_length());
}

// Channel-major copy of the segment so every embedded column is a contiguous
// slice of its channel.
std::vector<std::vector<double>> channel_columns(const Segment& segment) {
  const std::size_t channels = segment.source().num_channels();
  std::vector<std::vector<double>> cols(channels, std::vector<double>(segment.length()));
  for (std::size_t t = 0; t < segment.length(); ++t) {
    const auto row = segment.row(t);
    for (std::size_t c = 0; c < channels; ++c) cols[c][t] = row[c];
  }
  return cols;
}

}  // namespace

Matrix embed(const Segment& segment, const EmbeddingConfig& config) {
  check_length(segment, config);
  const std::size_t channels = segment.source().num_channels();
  const std::size_t delays = config.num_delays;
  const std::size_t rows = segment.length() - config.window();
  Matrix out(rows, channels * delays);
  for (std::size_t t = 0; t < rows; ++t) {
    const std::size_t now = t + config.window();
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t k = 0; k < delays; ++k)
        out(t, c * delays + k) = segment.at(now - k * config.delay_scale, c);
  }
  return out;
}

CorrelationMatrix channel_delay_correlation(const Segment& segment, const EmbeddingConfig& config) {
  check_length(segment, config);
  const ChannelSet& source = segment.source();
  const std::size_t channels = source.num_channels();
  const std::size_t delays = config.num_delays;
  const std::size_t dim = channels * delays;
  const std::size_t rows = segment.length() - config.window();
  const double inv_rows = 1.0 / static_cast<double>(rows);

  const auto signal = channel_columns(segment);

  // Standardized embedded columns, stored contiguously: column j at [j*rows, (j+1)*rows).
  std::vector<double> z(dim * rows);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t k = 0; k < delays; ++k) {
      const std::size_t j = c * delays + k;
      const double* first = signal[c].data() + config.window() - k * config.delay_scale;
      std::span<double> col(z.data() + j * rows, rows);
      std::copy(first, first + rows, col.begin());

      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      if (*lo == *hi) throw DegenerateChannelError(source.channel_names()[c], k * config.delay_scale);

      const double mean = simd::sum(col) * inv_rows;
      simd::shift_scale(col, mean, 1.0);
      const double var = simd::dot(col, col) * inv_rows;
      simd::shift_scale(col, 0.0, 1.0 / std::sqrt(var));
    }
  }

  CorrelationMatrix out;
  out.values = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::span<const double> zi(z.data() + i * rows, rows);
    out.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < dim; ++j) {
      const std::span<const double> zj(z.data() + j * rows, rows);
      const double r = simd::dot(zi, zj) * inv_rows;
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  out.config = config;
  out.channel_count = channels;
  out.sample_rate_hz = source.sample_rate_hz();
  out.channel_names = source.channel_names();
  return out;
}

}  // namespace tdec
