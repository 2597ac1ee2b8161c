#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tdec/embedding.hpp"
#include "tdec/spectrum.hpp"

namespace tdec {

struct ModalityPreset {
  Modality modality;
  double sample_rate_hz;
  EmbeddingConfig embedding;
  std::vector<IndexRange> ranges;
  std::size_t channels;
};

// Vocal tract variables: 100 Hz, 7-sample (70 ms) delay scale, 15 delays, 6 channels.
const ModalityPreset& tv_preset();
// Facial action units: 28 fps, 3-frame (~107 ms) delay scale, 15 delays, 17 channels.
const ModalityPreset& fau_preset();

std::optional<ModalityPreset> preset_for(Modality modality);
std::optional<ModalityPreset> parse_preset(std::string_view name);

// "lo:hi,lo:hi" -> ranges. Throws FormatError naming the offending token.
std::vector<IndexRange> parse_ranges(std::string_view text);
std::string format_ranges(const std::vector<IndexRange>& ranges);

}  // namespace tdec
