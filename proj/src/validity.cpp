#include "hotspot/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"

namespace hotspot {

namespace {

struct Groups {
  std::vector<std::size_t> members;  // retained dataset indices, in dataset order
  std::vector<std::size_t> cluster;  // dense cluster id per retained point
  std::vector<int> labels;           // original label per dense id, first-appearance order
  std::vector<std::size_t> sizes;

  std::size_t k() const noexcept { return labels.size(); }
};

Groups group(const Dataset& dataset, const Labeling& labeling, bool exclude_noise) {
  if (labeling.size() != dataset.n()) {
    throw DataError("labeling has " + std::to_string(labeling.size()) + " entries for " +
                    std::to_string(dataset.n()) + " points");
  }
  Groups g;
  std::unordered_map<int, std::size_t> dense;
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    const int label = labeling.labels[i];
    if (exclude_noise && label == kNoise) continue;
    auto [it, inserted] = dense.try_emplace(label, g.labels.size());
    if (inserted) {
      g.labels.push_back(label);
      g.sizes.push_back(0);
    }
    g.members.push_back(i);
    g.cluster.push_back(it->second);
    ++g.sizes[it->second];
  }
  if (g.members.empty()) throw PreconditionError("no points left to score (all noise)");
  return g;
}

void require_two_clusters(const Groups& g) {
  if (g.k() < 2) {
    throw PreconditionError("index needs at least 2 clusters, got " + std::to_string(g.k()));
  }
}

double euclid(const GeoPoint& p, const Center& c) noexcept {
  return std::hypot(p.lat_deg - c.lat_deg, p.lon_deg - c.lon_deg);
}

double squared(const GeoPoint& p, const Center& c) noexcept {
  const double dlat = p.lat_deg - c.lat_deg;
  const double dlon = p.lon_deg - c.lon_deg;
  return dlat * dlat + dlon * dlon;
}

std::vector<Center> centroids(const Dataset& dataset, const Groups& g) {
  std::vector<Center> sums(g.k());
  for (std::size_t r = 0; r < g.members.size(); ++r) {
    const GeoPoint& p = dataset.points[g.members[r]];
    sums[g.cluster[r]].lat_deg += p.lat_deg;
    sums[g.cluster[r]].lon_deg += p.lon_deg;
  }
  for (std::size_t c = 0; c < g.k(); ++c) {
    const auto n = static_cast<double>(g.sizes[c]);
    sums[c].lat_deg /= n;
    sums[c].lon_deg /= n;
  }
  return sums;
}

}  // namespace

std::vector<SilhouetteSample> silhouette_samples(const Dataset& dataset, const Labeling& labeling,
                                                 const ValidityOptions& options) {
  const Groups g = group(dataset, labeling, options.exclude_noise);
  require_two_clusters(g);

  const auto& pts = dataset.points;
  std::vector<SilhouetteSample> out(g.members.size());
  parallel_for(g.members.size(), options.threads, [&](std::size_t r) {
    const GeoPoint& p = pts[g.members[r]];
    std::vector<double> sums(g.k(), 0.0);
    for (std::size_t t = 0; t < g.members.size(); ++t) {
      if (t == r) continue;
      const GeoPoint& q = pts[g.members[t]];
      sums[g.cluster[t]] += std::hypot(p.lat_deg - q.lat_deg, p.lon_deg - q.lon_deg);
    }
    const std::size_t own = g.cluster[r];
    SilhouetteSample& sample = out[r];
    sample.index = g.members[r];
    sample.b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < g.k(); ++c) {
      if (c != own) sample.b = std::min(sample.b, sums[c] / static_cast<double>(g.sizes[c]));
    }
    if (g.sizes[own] == 1) {
      sample.a = 0.0;
      sample.s = 0.0;
      return;
    }
    sample.a = sums[own] / static_cast<double>(g.sizes[own] - 1);
    const double denom = std::max(sample.a, sample.b);
    sample.s = denom > 0.0 ? (sample.b - sample.a) / denom : 0.0;
  });
  return out;
}

double silhouette_score(const Dataset& dataset, const Labeling& labeling, const ValidityOptions& options) {
  const auto samples = silhouette_samples(dataset, labeling, options);
  double sum = 0.0;
  for (const auto& s : samples) sum += s.s;
  return sum / static_cast<double>(samples.size());
}

DaviesBouldinBreakdown davies_bouldin(const Dataset& dataset, const Labeling& labeling,
                                      const ValidityOptions& options) {
  const Groups g = group(dataset, labeling, options.exclude_noise);
  require_two_clusters(g);
  const std::size_t k = g.k();

  DaviesBouldinBreakdown out;
  out.cluster_labels = g.labels;
  out.centroids = centroids(dataset, g);
  out.mean_spread.assign(k, 0.0);
  for (std::size_t r = 0; r < g.members.size(); ++r) {
    out.mean_spread[g.cluster[r]] += euclid(dataset.points[g.members[r]], out.centroids[g.cluster[r]]);
  }
  for (std::size_t c = 0; c < k; ++c) out.mean_spread[c] /= static_cast<double>(g.sizes[c]);

  out.centroid_distance.assign(k, std::vector<double>(k, 0.0));
  out.similarity.assign(k, std::vector<double>(k, 0.0));
  out.per_cluster_max.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const Center& a = out.centroids[i];
      const Center& b = out.centroids[j];
      const double d = std::hypot(a.lat_deg - b.lat_deg, a.lon_deg - b.lon_deg);
      if (d == 0.0) {
        throw PreconditionError("Davies-Bouldin: clusters " + std::to_string(g.labels[i]) + " and " +
                                std::to_string(g.labels[j]) + " have coincident centroids");
      }
      out.centroid_distance[i][j] = d;
      out.similarity[i][j] = (out.mean_spread[i] + out.mean_spread[j]) / d;
      out.per_cluster_max[i] = std::max(out.per_cluster_max[i], out.similarity[i][j]);
    }
  }
  double sum = 0.0;
  for (double m : out.per_cluster_max) sum += m;
  out.score = options.db_combine == DaviesBouldinCombine::kMean ? sum / static_cast<double>(k) : 0.5 * sum;
  return out;
}

DispersionStats calinski_harabasz(const Dataset& dataset, const Labeling& labeling,
                                  const ValidityOptions& options) {
  const Groups g = group(dataset, labeling, options.exclude_noise);
  DispersionStats out;
  out.n = g.members.size();
  out.k = g.k();
  if (out.k < 2) throw PreconditionError("Calinski-Harabasz: needs at least 2 clusters");
  if (out.k >= out.n) throw PreconditionError("Calinski-Harabasz: k must be below the point count");

  out.cluster_labels = g.labels;
  out.cluster_sizes = g.sizes;
  out.centroids = centroids(dataset, g);
  for (std::size_t i : g.members) {
    out.global_centroid.lat_deg += dataset.points[i].lat_deg;
    out.global_centroid.lon_deg += dataset.points[i].lon_deg;
  }
  out.global_centroid.lat_deg /= static_cast<double>(out.n);
  out.global_centroid.lon_deg /= static_cast<double>(out.n);

  for (std::size_t r = 0; r < g.members.size(); ++r) {
    const GeoPoint& p = dataset.points[g.members[r]];
    out.tss += squared(p, out.global_centroid);
    out.ss_w += squared(p, out.centroids[g.cluster[r]]);
  }
  out.ss_b = out.tss - out.ss_w;

  double between = 0.0;
  for (std::size_t c = 0; c < out.k; ++c) {
    const double dlat = out.centroids[c].lat_deg - out.global_centroid.lat_deg;
    const double dlon = out.centroids[c].lon_deg - out.global_centroid.lon_deg;
    between += static_cast<double>(g.sizes[c]) * (dlat * dlat + dlon * dlon);
  }
  if (std::abs(between - out.ss_b) > 1e-9 * out.tss) {
    throw std::logic_error("Calinski-Harabasz: tss != ss_b + ss_w beyond 1e-9 relative");
  }

  if (!(out.ss_w > 0.0)) throw PreconditionError("Calinski-Harabasz: zero within-cluster dispersion");
  out.chi = (out.ss_b / out.ss_w) * (static_cast<double>(out.n - out.k) / static_cast<double>(out.k - 1));
  return out;
}

ValidityReport validity_report(const Dataset& dataset,
                               const std::vector<std::pair<std::string, Labeling>>& labelings,
                               const ValidityOptions& options) {
  if (labelings.empty()) throw InvalidArgument("validity_report: no labelings given");

  ValidityReport report;
  for (const auto& [name, labeling] : labelings) {
    ValidityRow row;
    row.name = name;
    row.n_clusters = labeling.n_clusters;
    row.n_noise = labeling.n_noise();
    auto attempt = [&](auto&& compute) -> std::optional<double> {
      try {
        return compute();
      } catch (const PreconditionError& e) {
        if (row.detail.empty()) row.detail = e.what();
        return std::nullopt;
      }
    };
    row.silhouette = attempt([&] { return silhouette_score(dataset, labeling, options); });
    row.davies_bouldin = attempt([&] { return davies_bouldin(dataset, labeling, options).score; });
    row.calinski_harabasz = attempt([&] { return calinski_harabasz(dataset, labeling, options).chi; });
    const bool ok = row.silhouette && row.davies_bouldin && row.calinski_harabasz;
    row.status = ok ? kStatusOk : kStatusNotScorable;
    report.rows.push_back(std::move(row));
  }

  auto mark = [&](const char* index, auto field, bool higher_is_better) {
    ValidityRow* best = nullptr;
    for (auto& row : report.rows) {
      const std::optional<double>& v = row.*field;
      if (!v) continue;
      if (!best || (higher_is_better ? *v > *(best->*field) : *v < *(best->*field))) best = &row;
    }
    if (best) best->best.emplace_back(index);
  };
  mark("silhouette", &ValidityRow::silhouette, true);
  mark("davies_bouldin", &ValidityRow::davies_bouldin, false);
  mark("calinski_harabasz", &ValidityRow::calinski_harabasz, true);
  return report;
}

}  // namespace hotspot
