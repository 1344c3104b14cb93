#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hotspot/ingest.hpp"
#include "hotspot/labeling.hpp"

namespace hotspot {

// Partitional methods work in raw degree space: a point is the vector
// (lat_deg, lon_deg) and distance is squared Euclidean.
struct Center {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  friend bool operator==(const Center&, const Center&) = default;
};

enum class KMeansInit { kRandomFromData, kKMeansPlusPlus };

struct KMeansParams {
  int k = 10;
  KMeansInit init = KMeansInit::kRandomFromData;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol_km = 0.1;
  unsigned threads = 1;
};

struct KMeansModel {
  std::vector<Center> centers;
  double inertia = 0.0;
  int iterations_run = 0;
  bool converged = false;
  // Inertia of each Lloyd assignment step, in order. Non-increasing.
  std::vector<double> inertia_trace;
};

struct MiniBatchParams {
  int k = 10;
  std::size_t batch_size = 100;
  int n_iter = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

void validate(const KMeansParams& params);
void validate(const MiniBatchParams& params);

// Lloyd's algorithm. Stops once no center moves tol_km or more (shift measured
// in km at the dataset's mean latitude) or after max_iter iterations.
// Throws PreconditionError when the dataset has fewer than k distinct points.
std::pair<KMeansModel, Labeling> kmeans_fit(const Dataset& dataset, const KMeansParams& params);

// Mini-batch k-means with per-center learning rate 1/count. A final pass over
// the full dataset produces the labeling and inertia.
std::pair<KMeansModel, Labeling> minibatch_kmeans_fit(const Dataset& dataset,
                                                      const MiniBatchParams& params);

// Index of the nearest center, ties to the lowest index.
std::size_t nearest_center(const GeoPoint& p, const std::vector<Center>& centers) noexcept;

struct KSelection {
  int chosen_k = 0;
  std::vector<int> ks;
  std::vector<double> scores;  // inertia for the elbow method, mean silhouette otherwise
};

// Fits k-means for every k in [k_min, k_max] and picks the point of the
// inertia curve farthest from the chord joining its endpoints.
KSelection select_k_elbow(const Dataset& dataset, int k_min, int k_max, std::uint64_t seed);

// Fits k-means for every k in [k_min, k_max] and picks the highest mean silhouette.
KSelection select_k_silhouette(const Dataset& dataset, int k_min, int k_max, std::uint64_t seed);

// Elbow rule on a precomputed curve: both axes are normalised to [0, 1] and
// the index with the largest distance to the chord wins; near-ties (within
// 1e-12) go to the smallest index.
std::size_t elbow_index(const std::vector<double>& curve);

}  // namespace hotspot
