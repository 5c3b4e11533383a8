#pragma once

// Published class histograms for the translation experiments, one row per
// experiment spec under fixtures/experiments.

#include <array>
#include <string_view>

namespace testing {

struct PublishedRow {
  std::string_view spec;
  std::array<int, 6> classes;
  int total;
};

inline constexpr std::array<PublishedRow, 11> kPublishedTable = {{
    {"ifthen-1", {2, 0, 1, 0, 6, 2}, 11},
    {"ifthen-4", {5, 2, 0, 1, 1, 2}, 11},
    {"ifthen-6", {6, 3, 0, 0, 0, 2}, 11},
    {"modal-1", {3, 0, 0, 0, 5, 0}, 8},
    {"modal-4", {5, 0, 0, 0, 3, 0}, 8},
    {"modal-6", {6, 0, 0, 0, 2, 0}, 8},
    {"expr-1-equal", {2, 0, 1, 0, 4, 1}, 8},
    {"expr-1-leq", {0, 0, 4, 0, 4, 0}, 8},
    {"expr-4", {1, 0, 1, 0, 3, 3}, 8},
    {"expr-6", {2, 0, 3, 0, 2, 1}, 8},
    {"expr-8", {3, 0, 0, 0, 3, 2}, 8},
}};

}  // namespace testing
