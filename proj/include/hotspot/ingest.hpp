#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hotspot/geo.hpp"
#include "hotspot/labeling.hpp"

namespace hotspot {

inline constexpr std::string_view kDefaultLatColumn = "Latitude";
inline constexpr std::string_view kDefaultLonColumn = "Longitude";

struct Dataset {
  std::vector<GeoPoint> points;
  std::string source;

  std::size_t n() const noexcept { return points.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_dropped_invalid = 0;
  std::size_t rows_dropped_duplicate = 0;
};

struct CsvOptions {
  std::string lat_column{kDefaultLatColumn};
  std::string lon_column{kDefaultLonColumn};
  bool dedupe = false;
};

// Loads decimal-degree coordinates from a headered CSV file. Rows with
// missing cells, unparseable numbers or out-of-range coordinates are dropped
// and counted. Throws DataError if the file cannot be opened or lacks either
// named column. Zero valid rows is not an error here; callers decide.
std::pair<Dataset, IngestReport> load_csv(const std::filesystem::path& path,
                                          const CsvOptions& options = {});

// Same as load_csv but over in-memory CSV text.
std::pair<Dataset, IngestReport> parse_csv(std::string_view text, const CsvOptions& options = {},
                                           std::string source = "<memory>");

// Splits one CSV record into cells. Double-quoted cells may contain commas
// and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

// n points drawn uniformly without replacement, original order preserved.
Dataset subsample(const Dataset& dataset, std::size_t n, std::uint64_t seed);

// Isotropic Gaussian blobs of standard deviation spread_km around each center.
// Labels are the index of the generating center.
std::pair<Dataset, Labeling> synth_blobs(std::size_t n_per_blob, const std::vector<GeoPoint>& centers,
                                         double spread_km, std::uint64_t seed);

// n points uniform in the latitude/longitude box [south, north] x [west, east].
Dataset synth_uniform(std::size_t n, GeoPoint south_west, GeoPoint north_east, std::uint64_t seed);

// Crash-like synthetic data over North Carolina: Gaussian hotspots around
// major cities (5-12 km spread, uneven weights) plus 15% uniform background.
Dataset synth_hotspots(std::size_t n, std::uint64_t seed);

// FNV-1a over the coordinate bit patterns, in order.
std::uint64_t dataset_checksum(const Dataset& dataset) noexcept;

}  // namespace hotspot
