#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/ingest.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/partitional.hpp"

namespace hotspot {

// How the Davies-Bouldin per-cluster maxima are combined. kMean averages over
// the k clusters; kHalfSum multiplies their sum by 1/2 and exists only for
// comparison with the printed two-cluster form of the index.
enum class DaviesBouldinCombine { kMean, kHalfSum };

struct ValidityOptions {
  bool exclude_noise = true;
  DaviesBouldinCombine db_combine = DaviesBouldinCombine::kMean;
  unsigned threads = 1;
};

// All indices measure Euclidean distance in (lat_deg, lon_deg) space.

struct SilhouetteSample {
  std::size_t index = 0;  // position in the dataset
  double a = 0.0;         // mean distance to the other members of its cluster
  double b = 0.0;         // smallest mean distance to another cluster
  double s = 0.0;
};

// One sample per retained point. Singleton clusters get s = 0.
// Throws PreconditionError with fewer than two retained clusters.
std::vector<SilhouetteSample> silhouette_samples(const Dataset& dataset, const Labeling& labeling,
                                                 const ValidityOptions& options = {});
double silhouette_score(const Dataset& dataset, const Labeling& labeling,
                        const ValidityOptions& options = {});

struct DaviesBouldinBreakdown {
  std::vector<int> cluster_labels;  // original label of each row, in order of first appearance
  std::vector<Center> centroids;
  std::vector<double> mean_spread;                   // mean member distance to the centroid
  std::vector<std::vector<double>> centroid_distance;
  std::vector<std::vector<double>> similarity;       // (spread_i + spread_j) / centroid distance
  std::vector<double> per_cluster_max;
  double score = 0.0;
};

// Throws PreconditionError with fewer than two clusters or coincident centroids.
DaviesBouldinBreakdown davies_bouldin(const Dataset& dataset, const Labeling& labeling,
                                      const ValidityOptions& options = {});

struct DispersionStats {
  std::vector<int> cluster_labels;
  std::vector<std::size_t> cluster_sizes;
  std::vector<Center> centroids;
  Center global_centroid;
  double tss = 0.0;   // total squared deviation from the global centroid
  double ss_w = 0.0;  // within-cluster squared deviation
  double ss_b = 0.0;  // tss - ss_w
  std::size_t n = 0;
  std::size_t k = 0;
  double chi = 0.0;
};

// Variance-ratio index. Throws PreconditionError unless 2 <= k <= n - 1 and
// the within-cluster dispersion is positive. The between-cluster dispersion
// is cross-checked against its direct sum and a std::logic_error signals a
// mismatch beyond 1e-9 relative.
DispersionStats calinski_harabasz(const Dataset& dataset, const Labeling& labeling,
                                  const ValidityOptions& options = {});

struct ValidityRow {
  std::string name;
  std::optional<double> silhouette;
  std::optional<double> davies_bouldin;
  std::optional<double> calinski_harabasz;
  int n_clusters = 0;
  std::size_t n_noise = 0;
  std::string status;  // "ok" or "not-scorable"
  std::string detail;  // first failure reason when not scorable
  std::vector<std::string> best;
};

struct ValidityReport {
  std::vector<ValidityRow> rows;
};

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusNotScorable = "not-scorable";

// Scores every labeling; precondition failures become not-scorable rows.
// Best per index: highest silhouette, lowest Davies-Bouldin, highest
// Calinski-Harabasz, first row wins ties. Throws InvalidArgument when empty.
ValidityReport validity_report(const Dataset& dataset,
                               const std::vector<std::pair<std::string, Labeling>>& labelings,
                               const ValidityOptions& options = {});

}  // namespace hotspot
