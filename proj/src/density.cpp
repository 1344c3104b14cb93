#include "hotspot/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <numbers>
#include <ostream>
#include <queue>
#include <string>

#include "hotspot/error.hpp"
#include "hotspot/geo.hpp"
#include "hotspot/parallel.hpp"

namespace hotspot {

namespace {

constexpr int kUnassigned = -2;
// Any radius at or above half the circumference covers the whole sphere.
constexpr double kWholeSphereKm = std::numbers::pi * kEarthRadiusKm;

double kth_smallest(std::vector<double>& distances, std::size_t k) {
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   distances.end());
  return distances[k - 1];
}

// Core distance of every point when neighbourhoods are unbounded: grow the
// query radius until it holds min_samples points.
std::vector<double> unbounded_core_distances(const RadiusIndex& index, std::size_t min_samples,
                                             double start_km, unsigned threads) {
  const std::size_t n = index.size();
  std::vector<double> core(n, kUnreachable);
  if (n < min_samples) return core;
  parallel_for(n, threads, [&](std::size_t i) {
    double radius = start_km;
    std::vector<double> distances;
    for (;;) {
      const auto found = index.query(index.point(i), radius);
      if (found.size() >= min_samples || radius >= kWholeSphereKm) {
        distances.clear();
        for (const auto& nb : found) distances.push_back(nb.distance_km);
        core[i] = kth_smallest(distances, min_samples);
        return;
      }
      radius = std::min(radius * 2.0, kUnreachable);
      if (radius >= kWholeSphereKm) radius = kUnreachable;
    }
  });
  return core;
}

}  // namespace

void validate(const DensityParams& params) {
  if (!(params.eps_km > 0.0)) throw InvalidArgument("eps_km must be positive");
  if (params.min_samples < 1) throw InvalidArgument("min_samples must be at least 1");
  if (!(params.max_eps_km > 0.0)) throw InvalidArgument("max_eps_km must be positive");
  if (std::isfinite(params.max_eps_km) && std::isfinite(params.eps_km) &&
      params.max_eps_km < params.eps_km) {
    throw InvalidArgument("max_eps_km must not be smaller than eps_km");
  }
}

std::vector<bool> core_points(const Dataset& dataset, const DensityParams& params) {
  validate(params);
  std::vector<bool> core(dataset.n(), false);
  if (dataset.n() == 0) return core;
  const RadiusIndex index(dataset.points, params.eps_km);
  std::vector<char> flags(dataset.n(), 0);
  parallel_for(dataset.n(), params.threads,
               [&](std::size_t i) { flags[i] = index.count(i) >= params.min_samples ? 1 : 0; });
  for (std::size_t i = 0; i < flags.size(); ++i) core[i] = flags[i] != 0;
  return core;
}

Labeling dbscan(const Dataset& dataset, const DensityParams& params) {
  validate(params);
  const std::size_t n = dataset.n();
  if (n == 0) return {};

  const RadiusIndex index(dataset.points, params.eps_km);
  std::vector<char> core(n, 0);
  parallel_for(n, params.threads,
               [&](std::size_t i) { core[i] = index.count(i) >= params.min_samples ? 1 : 0; });

  std::vector<int> labels(n, kUnassigned);
  int cluster = 0;
  std::deque<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (labels[seed] != kUnassigned || !core[seed]) continue;
    labels[seed] = cluster;
    frontier.push_back(seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : index.neighbors(p)) {
        if (labels[q] != kUnassigned) continue;
        labels[q] = cluster;
        if (core[q]) frontier.push_back(q);
      }
    }
    ++cluster;
  }
  for (int& l : labels) {
    if (l == kUnassigned) l = kNoise;
  }
  return Labeling{std::move(labels), cluster};
}

OpticsOrdering optics(const Dataset& dataset, const DensityParams& params) {
  validate(params);
  const std::size_t n = dataset.n();
  OpticsOrdering out;
  out.max_eps_km = params.max_eps_km;
  out.min_samples = params.min_samples;
  out.reachability.assign(n, kUnreachable);
  out.core_distance.assign(n, kUnreachable);
  out.predecessor.assign(n, std::nullopt);
  if (n == 0) return out;

  const bool unbounded = params.max_eps_km >= kWholeSphereKm;
  const RadiusIndex index(dataset.points,
                          unbounded ? std::min(params.eps_km, kWholeSphereKm) : params.max_eps_km);
  if (unbounded) {
    out.core_distance = unbounded_core_distances(index, params.min_samples,
                                                 std::min(params.eps_km, kWholeSphereKm), params.threads);
  }

  std::vector<char> processed(n, 0);
  // Unprocessed points with O(1) removal; only the unbounded sweep iterates it.
  std::vector<std::size_t> pending(n), slot(n);
  for (std::size_t i = 0; i < n; ++i) pending[i] = slot[i] = i;

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> seeds;
  std::size_t next_start = 0;
  std::vector<double> distances;

  auto relax = [&](std::size_t from, std::size_t to, double d) {
    const double r = std::max(out.core_distance[from], d);
    if (r < out.reachability[to]) {
      out.reachability[to] = r;
      out.predecessor[to] = from;
      seeds.emplace(r, to);
    }
  };

  out.order.reserve(n);
  while (out.order.size() < n) {
    std::size_t p = n;
    while (!seeds.empty()) {
      const auto [r, q] = seeds.top();
      seeds.pop();
      if (!processed[q] && r == out.reachability[q]) {
        p = q;
        break;
      }
    }
    if (p == n) {
      while (processed[next_start]) ++next_start;
      p = next_start;
    }

    processed[p] = 1;
    out.order.push_back(p);
    const std::size_t last = pending.back();
    pending[slot[p]] = last;
    slot[last] = slot[p];
    pending.pop_back();

    if (unbounded) {
      const double core = out.core_distance[p];
      if (!std::isfinite(core)) continue;
      const RadPoint& from = index.point(p);
      for (std::size_t q : pending) {
        const double current = out.reachability[q];
        if (core >= current) continue;
        const RadPoint& to = index.point(q);
        // Meridian arc never exceeds the great-circle distance.
        if (kEarthRadiusKm * std::abs(to.lat - from.lat) * (1.0 - 1e-12) >= current) continue;
        relax(p, q, arc_km(from, to));
      }
    } else {
      const auto neighborhood = index.neighbors_with_distance(p);
      if (neighborhood.size() < params.min_samples) continue;
      distances.clear();
      for (const auto& nb : neighborhood) distances.push_back(nb.distance_km);
      out.core_distance[p] = kth_smallest(distances, params.min_samples);
      for (const auto& nb : neighborhood) {
        if (!processed[nb.index]) relax(p, nb.index, nb.distance_km);
      }
    }
  }
  return out;
}

Labeling extract_dbscan_cut(const OpticsOrdering& ordering, double eps_km, std::size_t min_samples) {
  if (!(eps_km > 0.0)) throw InvalidArgument("extract_dbscan_cut: eps_km must be positive");
  if (eps_km > ordering.max_eps_km) {
    throw InvalidArgument("extract_dbscan_cut: eps_km exceeds the ordering's max_eps_km");
  }
  if (min_samples != ordering.min_samples) {
    throw InvalidArgument("extract_dbscan_cut: min_samples differs from the ordering's (" +
                          std::to_string(ordering.min_samples) + ")");
  }
  std::vector<int> labels(ordering.order.size(), kNoise);
  int cluster = -1;
  for (std::size_t p : ordering.order) {
    if (ordering.reachability[p] > eps_km) {
      if (ordering.core_distance[p] <= eps_km) labels[p] = ++cluster;
    } else if (cluster >= 0) {
      labels[p] = cluster;
    }
  }
  return Labeling{std::move(labels), cluster + 1};
}

void write_reachability_csv(std::ostream& out, const OpticsOrdering& ordering) {
  out << "visit_position,reachability_km\n";
  char buf[64];
  for (std::size_t pos = 0; pos < ordering.order.size(); ++pos) {
    const double r = ordering.reachability[ordering.order[pos]];
    if (std::isinf(r)) {
      out << pos << ",inf\n";
    } else {
      std::snprintf(buf, sizeof buf, "%.6f", r);
      out << pos << ',' << buf << '\n';
    }
  }
}

}  // namespace hotspot
