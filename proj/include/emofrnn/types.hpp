#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emofrnn {

/// Ordinal intensity label, 0 (no emotion) to 3 (high intensity).
using Label = int;

inline constexpr int kNumClasses = 4;

/// One value per intensity class, indexed by label.
using ClassArray = std::array<double, kNumClasses>;

using Vector = std::vector<double>;

enum class Emotion { anger, joy, sadness, fear };

inline constexpr std::array<Emotion, 4> kAllEmotions{
    Emotion::anger, Emotion::joy, Emotion::sadness, Emotion::fear};

std::string_view to_string(Emotion e);
std::optional<Emotion> parse_emotion(std::string_view token);

constexpr bool is_valid_label(long label) { return label >= 0 && label < kNumClasses; }

}  // namespace emofrnn
