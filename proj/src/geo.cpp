#include "hotspot/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPolarCutoffRad = 85.0 * kDegToRad;
// Widening applied to every pruning bound; the exact kernel filters afterwards.
constexpr double kSlackRad = 1e-9;
constexpr double kMinRowHeightRad = 1e-12;

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat_deg) && std::isfinite(p.lon_deg) && p.lat_deg >= -90.0 &&
         p.lat_deg <= 90.0 && p.lon_deg >= -180.0 && p.lon_deg <= 180.0;
}

RadPoint to_radians(const GeoPoint& p) noexcept {
  const double lat = p.lat_deg * kDegToRad;
  return {lat, p.lon_deg * kDegToRad, std::cos(lat)};
}

std::vector<RadPoint> to_radians(std::span<const GeoPoint> points) {
  std::vector<RadPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(to_radians(p));
  return out;
}

double arc_km(const RadPoint& p, const RadPoint& q) noexcept {
  const double s_lat = std::sin((q.lat - p.lat) * 0.5);
  const double s_lon = std::sin((q.lon - p.lon) * 0.5);
  double h = s_lat * s_lat + (p.cos_lat * q.cos_lat) * (s_lon * s_lon);
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double haversine_km(const GeoPoint& p, const GeoPoint& q) noexcept {
  return arc_km(to_radians(p), to_radians(q));
}

double km_to_radians(double km) {
  if (!(km >= 0.0)) throw InvalidArgument("km_to_radians: distance must be non-negative");
  return km / kEarthRadiusKm;
}

RadiusIndex::RadiusIndex(std::span<const GeoPoint> points, double radius_km)
    : points_(to_radians(points)), radius_km_(radius_km) {
  if (!(radius_km > 0.0)) throw InvalidArgument("RadiusIndex: radius must be positive");
  row_height_rad_ = std::clamp(radius_km / kEarthRadiusKm, kMinRowHeightRad, kPi);

  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::vector<std::int64_t> row_ids(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) row_ids[i] = row_of(points_[i].lat);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    if (row_ids[a] != row_ids[b]) return row_ids[a] < row_ids[b];
    if (points_[a].lon != points_[b].lon) return points_[a].lon < points_[b].lon;
    return a < b;
  });
  order_lon_.reserve(order_.size());
  for (std::size_t i : order_) order_lon_.push_back(points_[i].lon);

  for (std::size_t pos = 0; pos < order_.size();) {
    const std::int64_t id = row_ids[order_[pos]];
    std::size_t end = pos;
    while (end < order_.size() && row_ids[order_[end]] == id) ++end;
    rows_.push_back({id, pos, end});
    pos = end;
  }
}

std::int64_t RadiusIndex::row_of(double lat_rad) const noexcept {
  return static_cast<std::int64_t>(std::floor((lat_rad + kPi / 2.0) / row_height_rad_));
}

template <typename Visit>
void RadiusIndex::visit_candidates(const RadPoint& center, double radius_km, Visit&& visit) const {
  const double delta = radius_km / kEarthRadiusKm;
  if (points_.size() < kExhaustiveThreshold || delta >= kPi) {
    for (std::size_t i = 0; i < points_.size(); ++i) visit(i);
    return;
  }

  // Longitude windows as closed intervals in [-pi, pi].
  double windows[2][2];
  int n_windows = 0;
  bool full_longitude = std::abs(center.lat) + delta + kSlackRad >= kPolarCutoffRad;
  if (!full_longitude) {
    const double s = std::sin(delta) / center.cos_lat;
    if (s >= 1.0) {
      full_longitude = true;
    } else {
      const double half_width = std::asin(s) * (1.0 + 1e-9) + kSlackRad;
      const double lo = center.lon - half_width;
      const double hi = center.lon + half_width;
      if (half_width >= kPi) {
        full_longitude = true;
      } else if (lo < -kPi) {
        windows[n_windows][0] = -kPi, windows[n_windows][1] = hi, ++n_windows;
        windows[n_windows][0] = lo + 2.0 * kPi, windows[n_windows][1] = kPi, ++n_windows;
      } else if (hi > kPi) {
        windows[n_windows][0] = lo, windows[n_windows][1] = kPi, ++n_windows;
        windows[n_windows][0] = -kPi, windows[n_windows][1] = hi - 2.0 * kPi, ++n_windows;
      } else {
        windows[n_windows][0] = lo, windows[n_windows][1] = hi, ++n_windows;
      }
    }
  }

  const std::int64_t first_row = row_of(center.lat - delta - kSlackRad);
  const std::int64_t last_row = row_of(center.lat + delta + kSlackRad);
  auto row = std::lower_bound(rows_.begin(), rows_.end(), first_row,
                              [](const Row& r, std::int64_t id) { return r.id < id; });
  for (; row != rows_.end() && row->id <= last_row; ++row) {
    if (full_longitude) {
      for (std::size_t pos = row->begin; pos < row->end; ++pos) visit(order_[pos]);
      continue;
    }
    for (int w = 0; w < n_windows; ++w) {
      const auto lon_begin = order_lon_.begin() + static_cast<std::ptrdiff_t>(row->begin);
      const auto lon_end = order_lon_.begin() + static_cast<std::ptrdiff_t>(row->end);
      auto pos = std::lower_bound(lon_begin, lon_end, windows[w][0]);
      for (; pos != lon_end && *pos <= windows[w][1]; ++pos) {
        visit(order_[static_cast<std::size_t>(pos - order_lon_.begin())]);
      }
    }
  }
}

std::vector<Neighbor> RadiusIndex::query(const RadPoint& center, double radius_km) const {
  std::vector<Neighbor> out;
  visit_candidates(center, radius_km, [&](std::size_t j) {
    const double d = arc_km(center, points_[j]);
    if (d <= radius_km) out.push_back({j, d});
  });
  std::sort(out.begin(), out.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  return out;
}

std::vector<Neighbor> RadiusIndex::neighbors_with_distance(std::size_t i) const {
  return query(points_.at(i), radius_km_);
}

std::vector<std::size_t> RadiusIndex::neighbors(std::size_t i) const {
  const RadPoint& center = points_.at(i);
  std::vector<std::size_t> out;
  visit_candidates(center, radius_km_, [&](std::size_t j) {
    if (arc_km(center, points_[j]) <= radius_km_) out.push_back(j);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t RadiusIndex::count(std::size_t i) const {
  const RadPoint& center = points_.at(i);
  std::size_t n = 0;
  visit_candidates(center, radius_km_, [&](std::size_t j) {
    if (arc_km(center, points_[j]) <= radius_km_) ++n;
  });
  return n;
}

}  // namespace hotspot
