#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/ingest.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/validity.hpp"

#include "json.hpp"

namespace hotspot {

struct SummaryRow {
  std::size_t size = 0;
  int label = 0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

// Cluster sizes, largest first; equal sizes by ascending label.
struct ClusterSummary {
  std::string algorithm;
  std::vector<SummaryRow> rows;
  std::size_t n_noise = 0;
};

ClusterSummary summarize(const std::string& algorithm, const Labeling& labeling);

// Header "size,label".
void write_summary_csv(std::ostream& out, const ClusterSummary& summary);

// One label per line under the header "label".
void write_labels_csv(std::ostream& out, const Labeling& labeling);
Labeling read_labels_csv(const std::filesystem::path& path);

// FeatureCollection of Point features with [lon, lat] coordinates and the
// properties "cluster" (-1 for noise) and "noise".
nlohmann::ordered_json to_geojson(const Dataset& dataset, const Labeling& labeling);
void export_geojson(const Dataset& dataset, const Labeling& labeling, const std::filesystem::path& path);
std::pair<Dataset, Labeling> read_geojson(const std::filesystem::path& path);

// Object keyed by labeling name; each value carries silhouette,
// davies_bouldin, calinski_harabasz (null when not computable), n_clusters,
// n_noise, status, best (indices this row wins) and, when not scorable, detail.
nlohmann::ordered_json to_json(const ValidityReport& report);

// Writes `text` to `path`, throwing DataError if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hotspot
