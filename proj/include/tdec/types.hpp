#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tdec {

enum class Modality { TV, FAU, OTHER };
// Ordered so that SZ is the positive class of a binary SZ/HC problem.
enum class Label { SZ, HC, MDD };

std::string_view to_string(Modality m);
std::string_view to_string(Label l);
std::optional<Modality> parse_modality(std::string_view text);
std::optional<Label> parse_label(std::string_view text);

}  // namespace tdec
