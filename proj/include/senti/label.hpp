#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace senti {

enum class Label : int { Negative = 0, Positive = 1, Unlabeled = 2 };

inline constexpr std::size_t kNumClasses = 2;
inline constexpr std::array<Label, kNumClasses> kClasses{Label::Negative, Label::Positive};

constexpr std::size_t class_index(Label l) { return static_cast<std::size_t>(l); }
constexpr Label label_from_index(std::size_t i) { return static_cast<Label>(static_cast<int>(i)); }

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::Negative: return "negative";
    case Label::Positive: return "positive";
    case Label::Unlabeled: return "";
  }
  return "";
}

// Accepts the corpus spellings; nullopt for anything else.
inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "negative") return Label::Negative;
  if (s == "positive") return Label::Positive;
  if (s.empty()) return Label::Unlabeled;
  return std::nullopt;
}

}  // namespace senti
