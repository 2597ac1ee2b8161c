#include "tdec/presets.hpp"

#include <string>

#include "tdec/error.hpp"
#include "tdec/format.hpp"

namespace tdec {

const ModalityPreset& tv_preset() {
  static const ModalityPreset p{Modality::TV, 100.0, {7, 15}, {{0.0, 0.03}, {0.95, 1.0}}, 6};
  return p;
}

const ModalityPreset& fau_preset() {
  static const ModalityPreset p{Modality::FAU, 28.0, {3, 15}, {{0.0, 0.02}, {0.96, 1.0}}, 17};
  return p;
}

std::optional<ModalityPreset> preset_for(Modality modality) {
  if (modality == Modality::TV) return tv_preset();
  if (modality == Modality::FAU) return fau_preset();
  return std::nullopt;
}

std::optional<ModalityPreset> parse_preset(std::string_view name) {
  if (name == "tv" || name == "TV") return tv_preset();
  if (name == "fau" || name == "FAU") return fau_preset();
  return std::nullopt;
}

std::vector<IndexRange> parse_ranges(std::string_view text) {
  std::vector<IndexRange> out;
  if (trim(text).empty()) throw FormatError("empty range list");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view token = trim(text.substr(pos, comma - pos));
    const std::size_t colon = token.find(':');
    IndexRange r;
    if (colon == std::string_view::npos || !parse_double(token.substr(0, colon), r.lo) ||
        !parse_double(token.substr(colon + 1), r.hi))
      throw FormatError("bad index range '" + std::string(token) + "' (expected lo:hi)");
    if (!(r.lo >= 0.0 && r.lo <= r.hi && r.hi <= 1.0))
      throw FormatError("bad index range '" + std::string(token) + "' (need 0 <= lo <= hi <= 1)");
    out.push_back(r);
    pos = comma + 1;
  }
  return out;
}

std::string format_ranges(const std::vector<IndexRange>& ranges) {
  std::string out;
  for (const auto& r : ranges) {
    if (!out.empty()) out += ',';
    out += "[" + format_g12(r.lo) + "-" + format_g12(r.hi) + "]";
  }
  return out;
}

}  // namespace tdec
