#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace hotspot {

// Spherical Earth used by every distance computation in the toolkit.
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDegToRad = std::numbers::pi / 180.0;

struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// True when both coordinates are finite and inside [-90, 90] x [-180, 180].
bool is_valid(const GeoPoint& p) noexcept;

// Point pre-converted to radians, with the cosine of latitude cached.
// Every haversine evaluation goes through this form so that results are
// bit-identical no matter which caller computes them.
struct RadPoint {
  double lat = 0.0;
  double lon = 0.0;
  double cos_lat = 1.0;
};

RadPoint to_radians(const GeoPoint& p) noexcept;
std::vector<RadPoint> to_radians(std::span<const GeoPoint> points);

// Great-circle distance on a sphere of radius kEarthRadiusKm (haversine form).
double haversine_km(const GeoPoint& p, const GeoPoint& q) noexcept;
// Same kernel over pre-converted points; haversine_km delegates here.
double arc_km(const RadPoint& p, const RadPoint& q) noexcept;

// Angle subtended by an arc of `km` kilometres. Throws InvalidArgument for negative input.
double km_to_radians(double km);

// Kilometres spanned by one degree of latitude.
inline constexpr double kKmPerDegree = kEarthRadiusKm * kDegToRad;

struct Neighbor {
  std::size_t index = 0;
  double distance_km = 0.0;
};

// Closed-ball radius queries over an immutable point set.
//
// Points are bucketed into latitude rows of angular height radius/R and kept
// sorted by longitude within each row. A query visits the rows its latitude
// band touches and, per row, the longitude window that bounds a spherical cap
// of the query radius. Caps that come within 5 degrees of a pole, and indexes
// with fewer than kExhaustiveThreshold points, scan exhaustively instead.
//
// Every candidate is confirmed with the exact haversine kernel, so results
// are exactly {j : haversine_km(p_i, p_j) <= radius}, self included, sorted
// by index.
class RadiusIndex {
 public:
  static constexpr std::size_t kExhaustiveThreshold = 32;

  RadiusIndex(std::span<const GeoPoint> points, double radius_km);

  std::size_t size() const noexcept { return points_.size(); }
  double radius_km() const noexcept { return radius_km_; }

  std::vector<std::size_t> neighbors(std::size_t i) const;
  std::vector<Neighbor> neighbors_with_distance(std::size_t i) const;
  std::size_t count(std::size_t i) const;

  // Query with an arbitrary radius (not limited to the build radius).
  std::vector<Neighbor> query(const RadPoint& center, double radius_km) const;

  const RadPoint& point(std::size_t i) const { return points_[i]; }

 private:
  struct Row {
    std::int64_t id;
    std::size_t begin;
    std::size_t end;
  };

  template <typename Visit>
  void visit_candidates(const RadPoint& center, double radius_km, Visit&& visit) const;

  std::int64_t row_of(double lat_rad) const noexcept;

  std::vector<RadPoint> points_;
  double radius_km_;
  double row_height_rad_;
  std::vector<std::size_t> order_;  // point indices grouped by row, sorted by longitude
  std::vector<double> order_lon_;   // longitudes aligned with order_
  std::vector<Row> rows_;           // sorted by id
};

}  // namespace hotspot
