#include "hotspot/partitional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/validity.hpp"

namespace hotspot {

namespace {

double squared_distance(const GeoPoint& p, const Center& c) noexcept {
  const double dlat = p.lat_deg - c.lat_deg;
  const double dlon = p.lon_deg - c.lon_deg;
  return dlat * dlat + dlon * dlon;
}

std::size_t count_distinct(const Dataset& dataset, std::size_t stop_at) {
  std::set<std::pair<double, double>> seen;
  for (const auto& p : dataset.points) {
    seen.emplace(p.lat_deg, p.lon_deg);
    if (seen.size() >= stop_at) break;
  }
  return seen.size();
}

void check_fit_preconditions(const Dataset& dataset, int k) {
  const auto needed = static_cast<std::size_t>(k);
  if (dataset.n() < needed) {
    throw PreconditionError("k-means: dataset has " + std::to_string(dataset.n()) +
                            " points, fewer than k=" + std::to_string(k));
  }
  if (count_distinct(dataset, needed) < needed) {
    throw PreconditionError("k-means: fewer than k=" + std::to_string(k) + " distinct points");
  }
}

// k centers at distinct data points, sampled without replacement.
std::vector<Center> init_random(const Dataset& dataset, int k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(dataset.n());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::set<std::pair<double, double>> used;
  std::vector<Center> centers;
  for (std::size_t i = 0; i < idx.size() && centers.size() < static_cast<std::size_t>(k); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
    const GeoPoint& p = dataset.points[idx[i]];
    if (used.emplace(p.lat_deg, p.lon_deg).second) centers.push_back({p.lat_deg, p.lon_deg});
  }
  return centers;
}

std::vector<Center> init_plus_plus(const Dataset& dataset, int k, std::mt19937_64& rng) {
  const auto& pts = dataset.points;
  std::vector<Center> centers;
  std::uniform_int_distribution<std::size_t> first(0, pts.size() - 1);
  const GeoPoint& p0 = pts[first(rng)];
  centers.push_back({p0.lat_deg, p0.lon_deg});

  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = squared_distance(pts[i], centers[0]);
  std::vector<double> cumulative(pts.size());
  while (centers.size() < static_cast<std::size_t>(k)) {
    std::partial_sum(d2.begin(), d2.end(), cumulative.begin());
    std::uniform_real_distribution<double> u(0.0, cumulative.back());
    const double r = u(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    auto chosen = static_cast<std::size_t>(it - cumulative.begin());
    if (chosen == pts.size()) {
      // r rounded up to the total; take the last point with positive weight.
      while (d2[--chosen] == 0.0) {
      }
    }
    const Center c{pts[chosen].lat_deg, pts[chosen].lon_deg};
    centers.push_back(c);
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = std::min(d2[i], squared_distance(pts[i], c));
  }
  return centers;
}

double assign(const Dataset& dataset, const std::vector<Center>& centers, unsigned threads,
              std::vector<int>& labels, std::vector<double>& cost) {
  const auto& pts = dataset.points;
  labels.resize(pts.size());
  cost.resize(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) {
    const std::size_t c = nearest_center(pts[i], centers);
    labels[i] = static_cast<int>(c);
    cost[i] = squared_distance(pts[i], centers[c]);
  });
  // Fixed summation order keeps inertia identical regardless of threads.
  return std::accumulate(cost.begin(), cost.end(), 0.0);
}

double mean_latitude_cos(const Dataset& dataset) {
  double sum = 0.0;
  for (const auto& p : dataset.points) sum += p.lat_deg;
  const double mean = dataset.n() ? sum / static_cast<double>(dataset.n()) : 0.0;
  return std::cos(mean * kDegToRad);
}

}  // namespace

void validate(const KMeansParams& params) {
  if (params.k < 1) throw InvalidArgument("k-means: k must be at least 1");
  if (params.max_iter < 1) throw InvalidArgument("k-means: max_iter must be at least 1");
  if (!(params.tol_km >= 0.0) || !std::isfinite(params.tol_km)) {
    throw InvalidArgument("k-means: tol_km must be finite and non-negative");
  }
}

void validate(const MiniBatchParams& params) {
  if (params.k < 1) throw InvalidArgument("mini-batch k-means: k must be at least 1");
  if (params.batch_size < 1) throw InvalidArgument("mini-batch k-means: batch_size must be at least 1");
  if (params.n_iter < 1) throw InvalidArgument("mini-batch k-means: n_iter must be at least 1");
}

std::size_t nearest_center(const GeoPoint& p, const std::vector<Center>& centers) noexcept {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::pair<KMeansModel, Labeling> kmeans_fit(const Dataset& dataset, const KMeansParams& params) {
  validate(params);
  check_fit_preconditions(dataset, params.k);

  std::mt19937_64 rng(params.seed);
  KMeansModel model;
  model.centers = params.init == KMeansInit::kKMeansPlusPlus ? init_plus_plus(dataset, params.k, rng)
                                                             : init_random(dataset, params.k, rng);

  const double cos_mean_lat = mean_latitude_cos(dataset);
  const auto k = static_cast<std::size_t>(params.k);
  const auto& pts = dataset.points;
  std::vector<int> labels;
  std::vector<double> cost;

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    model.inertia_trace.push_back(assign(dataset, model.centers, params.threads, labels, cost));

    std::vector<double> sum_lat(k, 0.0), sum_lon(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      sum_lat[c] += pts[i].lat_deg;
      sum_lon[c] += pts[i].lon_deg;
      ++count[c];
    }
    std::vector<Center> next(k);
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) {
        empty.push_back(c);
        continue;
      }
      const auto n = static_cast<double>(count[c]);
      next[c] = {sum_lat[c] / n, sum_lon[c] / n};
    }
    if (!empty.empty()) {
      // Reseed each empty cluster at the point farthest from its own updated center.
      std::vector<double> far(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        far[i] = squared_distance(pts[i], next[static_cast<std::size_t>(labels[i])]);
      }
      std::vector<std::size_t> by_distance(pts.size());
      std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
      std::stable_sort(by_distance.begin(), by_distance.end(),
                       [&](std::size_t a, std::size_t b) { return far[a] > far[b]; });
      for (std::size_t e = 0; e < empty.size(); ++e) {
        const GeoPoint& p = pts[by_distance[e]];
        next[empty[e]] = {p.lat_deg, p.lon_deg};
      }
    }

    double max_shift_km = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double dlat_km = (next[c].lat_deg - model.centers[c].lat_deg) * kKmPerDegree;
      const double dlon_km = (next[c].lon_deg - model.centers[c].lon_deg) * kKmPerDegree * cos_mean_lat;
      max_shift_km = std::max(max_shift_km, std::hypot(dlat_km, dlon_km));
    }
    model.centers = std::move(next);
    model.iterations_run = iter;
    if (max_shift_km < params.tol_km || max_shift_km == 0.0) {
      model.converged = true;
      break;
    }
  }

  model.inertia = assign(dataset, model.centers, params.threads, labels, cost);
  return {std::move(model), make_labeling(std::move(labels))};
}

std::pair<KMeansModel, Labeling> minibatch_kmeans_fit(const Dataset& dataset,
                                                      const MiniBatchParams& params) {
  validate(params);
  check_fit_preconditions(dataset, params.k);
  if (params.batch_size > dataset.n()) {
    throw PreconditionError("mini-batch k-means: batch_size " + std::to_string(params.batch_size) +
                            " exceeds dataset size " + std::to_string(dataset.n()));
  }

  std::mt19937_64 rng(params.seed);
  KMeansModel model;
  model.centers = init_random(dataset, params.k, rng);

  const auto& pts = dataset.points;
  std::vector<std::size_t> counts(model.centers.size(), 0);
  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> batch_center(params.batch_size);

  for (int iter = 0; iter < params.n_iter; ++iter) {
    // Partial Fisher-Yates: perm[0, batch_size) becomes a uniform sample without replacement.
    for (std::size_t i = 0; i < params.batch_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, perm.size() - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    for (std::size_t i = 0; i < params.batch_size; ++i) {
      batch_center[i] = nearest_center(pts[perm[i]], model.centers);
    }
    for (std::size_t i = 0; i < params.batch_size; ++i) {
      const GeoPoint& p = pts[perm[i]];
      Center& c = model.centers[batch_center[i]];
      const double rate = 1.0 / static_cast<double>(++counts[batch_center[i]]);
      c.lat_deg += rate * (p.lat_deg - c.lat_deg);
      c.lon_deg += rate * (p.lon_deg - c.lon_deg);
    }
  }
  model.iterations_run = params.n_iter;

  std::vector<int> labels;
  std::vector<double> cost;
  model.inertia = assign(dataset, model.centers, params.threads, labels, cost);
  model.inertia_trace.push_back(model.inertia);
  return {std::move(model), make_labeling(std::move(labels))};
}

std::size_t elbow_index(const std::vector<double>& curve) {
  if (curve.size() < 3) return 0;
  const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return 0;
  const double last = static_cast<double>(curve.size() - 1);
  const double y0 = (curve.front() - *lo) / range;
  const double y1 = (curve.back() - *lo) / range;
  const double norm = std::hypot(1.0, y1 - y0);

  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double x = static_cast<double>(i) / last;
    const double y = (curve[i] - *lo) / range;
    const double d = std::abs((y1 - y0) * x - (y - y0)) / norm;
    if (d > best_d + 1e-12) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

namespace {

void check_k_range(const Dataset& dataset, int k_min, int k_max, int lowest) {
  if (k_min < lowest) {
    throw InvalidArgument("k selection: k_min must be at least " + std::to_string(lowest));
  }
  if (k_min >= k_max) throw InvalidArgument("k selection: k_min must be smaller than k_max");
  if (static_cast<std::size_t>(k_max) > dataset.n()) {
    throw InvalidArgument("k selection: k_max exceeds dataset size");
  }
}

// Best of several k-means++ restarts; restarts keep the curve free of local-minimum spikes.
std::pair<KMeansModel, Labeling> fit_for_selection(const Dataset& dataset, int k, std::uint64_t seed) {
  constexpr int kRestarts = 4;
  std::pair<KMeansModel, Labeling> best;
  bool have = false;
  for (int r = 0; r < kRestarts; ++r) {
    KMeansParams params;
    params.k = k;
    params.init = KMeansInit::kKMeansPlusPlus;
    params.seed = seed * 1000003ULL + static_cast<std::uint64_t>(k) * 101ULL + static_cast<std::uint64_t>(r);
    params.tol_km = 0.0;
    auto fit = kmeans_fit(dataset, params);
    if (!have || fit.first.inertia < best.first.inertia) {
      best = std::move(fit);
      have = true;
    }
  }
  return best;
}

}  // namespace

KSelection select_k_elbow(const Dataset& dataset, int k_min, int k_max, std::uint64_t seed) {
  check_k_range(dataset, k_min, k_max, 1);
  KSelection out;
  for (int k = k_min; k <= k_max; ++k) {
    out.ks.push_back(k);
    out.scores.push_back(fit_for_selection(dataset, k, seed).first.inertia);
  }
  out.chosen_k = out.ks[elbow_index(out.scores)];
  return out;
}

KSelection select_k_silhouette(const Dataset& dataset, int k_min, int k_max, std::uint64_t seed) {
  check_k_range(dataset, k_min, k_max, 2);
  KSelection out;
  std::size_t best = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const auto fit = fit_for_selection(dataset, k, seed);
    out.ks.push_back(k);
    out.scores.push_back(silhouette_score(dataset, fit.second, {}));
    if (out.scores.back() > out.scores[best]) best = out.scores.size() - 1;
  }
  out.chosen_k = out.ks[best];
  return out;
}

}  // namespace hotspot
