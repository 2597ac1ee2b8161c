#include "tdec/types.hpp"

namespace tdec {

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::TV: return "TV";
    case Modality::FAU: return "FAU";
    case Modality::OTHER: return "OTHER";
  }
  return "OTHER";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::SZ: return "SZ";
    case Label::HC: return "HC";
    case Label::MDD: return "MDD";
  }
  return "HC";
}

std::optional<Modality> parse_modality(std::string_view text) {
  if (text == "TV" || text == "tv") return Modality::TV;
  if (text == "FAU" || text == "fau") return Modality::FAU;
  if (text == "OTHER" || text == "other") return Modality::OTHER;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "SZ") return Label::SZ;
  if (text == "HC") return Label::HC;
  if (text == "MDD") return Label::MDD;
  return std::nullopt;
}

}  // namespace tdec
