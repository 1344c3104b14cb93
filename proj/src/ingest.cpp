#include "hotspot/ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::size_t find_column(const std::vector<std::string>& header, std::string_view name,
                        const std::string& source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw DataError(source + ": missing column '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::pair<Dataset, IngestReport> parse_csv(std::string_view text, const CsvOptions& options,
                                           std::string source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  Dataset dataset;
  dataset.source = std::move(source);
  IngestReport report;

  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    if (line.ends_with('\r')) line.remove_suffix(1);
    pos = nl + 1;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw DataError(dataset.source + ": missing header row");
  const auto header = split_csv_line(line);
  const std::size_t lat_col = find_column(header, options.lat_column, dataset.source);
  const std::size_t lon_col = find_column(header, options.lon_column, dataset.source);

  std::set<std::pair<double, double>> seen;
  while (next_line(line)) {
    ++report.rows_read;
    const auto cells = split_csv_line(line);
    GeoPoint p;
    if (lat_col >= cells.size() || lon_col >= cells.size() ||
        !parse_double(cells[lat_col], p.lat_deg) || !parse_double(cells[lon_col], p.lon_deg) ||
        !is_valid(p)) {
      ++report.rows_dropped_invalid;
      continue;
    }
    if (options.dedupe && !seen.emplace(p.lat_deg, p.lon_deg).second) {
      ++report.rows_dropped_duplicate;
      continue;
    }
    dataset.points.push_back(p);
  }
  report.rows_kept = dataset.points.size();
  return {std::move(dataset), report};
}

std::pair<Dataset, IngestReport> load_csv(const std::filesystem::path& path,
                                          const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), options, path.string());
}

Dataset subsample(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
  if (n > dataset.n()) {
    throw InvalidArgument("subsample: requested " + std::to_string(n) + " points from a dataset of " +
                          std::to_string(dataset.n()));
  }
  std::vector<std::size_t> idx(dataset.n());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());

  Dataset out;
  out.source = dataset.source;
  out.points.reserve(n);
  for (std::size_t i : idx) out.points.push_back(dataset.points[i]);
  return out;
}

std::pair<Dataset, Labeling> synth_blobs(std::size_t n_per_blob, const std::vector<GeoPoint>& centers,
                                         double spread_km, std::uint64_t seed) {
  if (centers.empty()) throw InvalidArgument("synth_blobs: at least one center is required");
  if (!(spread_km > 0.0)) throw InvalidArgument("synth_blobs: spread_km must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, spread_km);
  Dataset dataset;
  dataset.source = "synth_blobs";
  std::vector<int> labels;
  dataset.points.reserve(n_per_blob * centers.size());
  labels.reserve(n_per_blob * centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const GeoPoint& center = centers[c];
    const double km_per_lon_deg =
        kKmPerDegree * std::max(std::cos(center.lat_deg * kDegToRad), 1e-6);
    for (std::size_t i = 0; i < n_per_blob; ++i) {
      const double north_km = jitter(rng);
      const double east_km = jitter(rng);
      GeoPoint p{center.lat_deg + north_km / kKmPerDegree, center.lon_deg + east_km / km_per_lon_deg};
      p.lat_deg = std::clamp(p.lat_deg, -90.0, 90.0);
      p.lon_deg = std::clamp(p.lon_deg, -180.0, 180.0);
      dataset.points.push_back(p);
      labels.push_back(static_cast<int>(c));
    }
  }
  return {std::move(dataset), make_labeling(std::move(labels))};
}

Dataset synth_uniform(std::size_t n, GeoPoint south_west, GeoPoint north_east, std::uint64_t seed) {
  if (!is_valid(south_west) || !is_valid(north_east) || south_west.lat_deg > north_east.lat_deg ||
      south_west.lon_deg > north_east.lon_deg) {
    throw InvalidArgument("synth_uniform: invalid bounding box");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lat(south_west.lat_deg, north_east.lat_deg);
  std::uniform_real_distribution<double> lon(south_west.lon_deg, north_east.lon_deg);
  Dataset dataset;
  dataset.source = "synth_uniform";
  dataset.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double la = lat(rng);
    dataset.points.push_back({la, lon(rng)});
  }
  return dataset;
}

Dataset synth_hotspots(std::size_t n, std::uint64_t seed) {
  struct Hotspot {
    GeoPoint center;
    double weight;
    double spread_km;
  };
  static const Hotspot kHotspots[] = {
      {{35.227, -80.843}, 0.18, 9.0},  {{35.780, -78.639}, 0.15, 10.0}, {{36.073, -79.792}, 0.09, 7.0},
      {{35.994, -78.899}, 0.08, 6.0},  {{36.100, -80.244}, 0.08, 7.0},  {{35.053, -78.878}, 0.07, 8.0},
      {{34.226, -77.945}, 0.06, 6.0},  {{35.595, -82.551}, 0.05, 6.0},  {{35.955, -80.005}, 0.05, 5.0},
      {{35.612, -77.366}, 0.04, 5.0},  {{34.754, -77.430}, 0.03, 12.0}, {{35.262, -81.187}, 0.02, 6.0},
  };
  constexpr double kBackground = 0.15;

  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (const auto& h : kHotspots) weights.push_back(h.weight);
  std::discrete_distribution<std::size_t> which(weights.begin(), weights.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset dataset;
  dataset.source = "synth_hotspots";
  dataset.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    GeoPoint p;
    if (unit(rng) < kBackground) {
      p.lat_deg = 33.9 + 2.6 * unit(rng);
      p.lon_deg = -84.3 + 8.8 * unit(rng);
    } else {
      const Hotspot& h = kHotspots[which(rng)];
      const double km_per_lon_deg = kKmPerDegree * std::cos(h.center.lat_deg * kDegToRad);
      p.lat_deg = h.center.lat_deg + gauss(rng) * h.spread_km / kKmPerDegree;
      p.lon_deg = h.center.lon_deg + gauss(rng) * h.spread_km / km_per_lon_deg;
    }
    dataset.points.push_back(p);
  }
  return dataset;
}

std::uint64_t dataset_checksum(const Dataset& dataset) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : dataset.points) {
    mix(p.lat_deg);
    mix(p.lon_deg);
  }
  return h;
}

}  // namespace hotspot
