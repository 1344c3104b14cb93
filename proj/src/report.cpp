#include "hotspot/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

ClusterSummary summarize(const std::string& algorithm, const Labeling& labeling) {
  std::map<int, std::size_t> sizes;
  ClusterSummary summary;
  summary.algorithm = algorithm;
  for (int l : labeling.labels) {
    if (l == kNoise) {
      ++summary.n_noise;
    } else {
      ++sizes[l];
    }
  }
  for (const auto& [label, size] : sizes) summary.rows.push_back({size, label});
  std::stable_sort(summary.rows.begin(), summary.rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) { return a.size > b.size; });
  return summary;
}

void write_summary_csv(std::ostream& out, const ClusterSummary& summary) {
  out << "size,label\n";
  for (const auto& row : summary.rows) out << row.size << ',' << row.label << '\n';
}

void write_labels_csv(std::ostream& out, const Labeling& labeling) {
  out << "label\n";
  for (int l : labeling.labels) out << l << '\n';
}

Labeling read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open labeling file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 5) != "label") {
    throw DataError(path.string() + ": expected header 'label'");
  }
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    int value = 0;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < kNoise) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": invalid label '" + line + "'");
    }
    labels.push_back(value);
  }
  return make_labeling(std::move(labels));
}

nlohmann::ordered_json to_geojson(const Dataset& dataset, const Labeling& labeling) {
  if (labeling.size() != dataset.n()) {
    throw DataError("labeling has " + std::to_string(labeling.size()) + " entries for " +
                    std::to_string(dataset.n()) + " points");
  }
  using Json = nlohmann::ordered_json;
  Json features = Json::array();
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    const GeoPoint& p = dataset.points[i];
    Json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Point"}, {"coordinates", {p.lon_deg, p.lat_deg}}};
    feature["properties"] = {{"cluster", labeling.labels[i]}, {"noise", labeling.labels[i] == kNoise}};
    features.push_back(std::move(feature));
  }
  Json collection;
  collection["type"] = "FeatureCollection";
  collection["features"] = std::move(features);
  return collection;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void export_geojson(const Dataset& dataset, const Labeling& labeling, const std::filesystem::path& path) {
  write_text_file(path, to_geojson(dataset, labeling).dump(1) + "\n");
}

std::pair<Dataset, Labeling> read_geojson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw DataError(path.string() + ": not a FeatureCollection");
  }
  Dataset dataset;
  dataset.source = path.string();
  std::vector<int> labels;
  try {
    for (const auto& f : doc["features"]) {
      const auto& coords = f.at("geometry").at("coordinates");
      dataset.points.push_back({coords.at(1).get<double>(), coords.at(0).get<double>()});
      labels.push_back(f.at("properties").at("cluster").get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": malformed feature: " + e.what());
  }
  return {std::move(dataset), make_labeling(std::move(labels))};
}

nlohmann::ordered_json to_json(const ValidityReport& report) {
  using Json = nlohmann::ordered_json;
  Json out = Json::object();
  auto number = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  for (const auto& row : report.rows) {
    Json entry;
    entry["silhouette"] = number(row.silhouette);
    entry["davies_bouldin"] = number(row.davies_bouldin);
    entry["calinski_harabasz"] = number(row.calinski_harabasz);
    entry["n_clusters"] = row.n_clusters;
    entry["n_noise"] = row.n_noise;
    entry["status"] = row.status;
    entry["best"] = row.best;
    if (!row.detail.empty()) entry["detail"] = row.detail;
    out[row.name] = std::move(entry);
  }
  return out;
}

}  // namespace hotspot
