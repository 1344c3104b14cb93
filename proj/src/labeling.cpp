#include "hotspot/labeling.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace hotspot {

std::size_t Labeling::n_noise() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

Labeling make_labeling(std::vector<int> labels) {
  std::unordered_set<int> seen;
  for (int l : labels) {
    if (l >= 0) seen.insert(l);
  }
  Labeling out{std::move(labels), static_cast<int>(seen.size())};
  return out;
}

Labeling canonicalize(std::span<const int> labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l < 0) {
      out.push_back(kNoise);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return Labeling{std::move(out), static_cast<int>(remap.size())};
}

}  // namespace hotspot
