#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hotspot {

inline constexpr int kNoise = -1;

// Per-point cluster assignment; -1 marks noise. Every algorithm returns one.
struct Labeling {
  std::vector<int> labels;
  int n_clusters = 0;  // number of distinct non-negative labels

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t n_noise() const noexcept;

  friend bool operator==(const Labeling&, const Labeling&) = default;
};

// Builds a Labeling and counts its distinct non-negative labels.
Labeling make_labeling(std::vector<int> labels);

// Renumbers clusters 0.. in order of first appearance; noise stays -1.
Labeling canonicalize(std::span<const int> labels);

}  // namespace hotspot
