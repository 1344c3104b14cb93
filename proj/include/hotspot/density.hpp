#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "hotspot/ingest.hpp"
#include "hotspot/labeling.hpp"

namespace hotspot {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Neighbourhoods are closed haversine balls that contain the query point, so
// min_samples counts the point itself.
struct DensityParams {
  double eps_km = 5.0;
  std::size_t min_samples = 300;
  double max_eps_km = kUnreachable;  // OPTICS only
  unsigned threads = 1;
};

void validate(const DensityParams& params);

// Core points have at least min_samples points within eps_km. Clusters are
// connected components of core points, numbered in scan order; a border
// point joins the first cluster that reaches it; the rest is noise (-1).
Labeling dbscan(const Dataset& dataset, const DensityParams& params);

// Per-point core flags for the given eps/min_samples.
std::vector<bool> core_points(const Dataset& dataset, const DensityParams& params);

struct OpticsOrdering {
  std::vector<std::size_t> order;                     // visit sequence
  std::vector<double> reachability;                   // per point, km; kUnreachable if undefined
  std::vector<double> core_distance;                  // per point, km; kUnreachable if not core
  std::vector<std::optional<std::size_t>> predecessor;
  double max_eps_km = kUnreachable;
  std::size_t min_samples = 0;
};

// Ordered expansion over neighbourhoods capped at max_eps_km. The seed queue
// pops the smallest reachability first, ties to the smallest index; when it
// runs dry the lowest unprocessed index starts a new component.
OpticsOrdering optics(const Dataset& dataset, const DensityParams& params);

// DBSCAN-equivalent labeling read off an ordering at radius eps_km. Throws
// InvalidArgument when eps_km exceeds the ordering's max_eps_km or when
// min_samples differs from the one the ordering was built with.
Labeling extract_dbscan_cut(const OpticsOrdering& ordering, double eps_km, std::size_t min_samples);

// Two-column chart for plotting: visit_position,reachability_km with "inf"
// for undefined reachability.
void write_reachability_csv(std::ostream& out, const OpticsOrdering& ordering);

}  // namespace hotspot
