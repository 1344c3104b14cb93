#include "hotspot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "hotspot/error.hpp"

namespace hotspot {

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kKMeans: return "kmeans";
    case Algorithm::kMiniBatchKMeans: return "minibatch_kmeans";
    case Algorithm::kOptics: return "optics";
    case Algorithm::kDbscan: return "dbscan";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::kKMeans, Algorithm::kMiniBatchKMeans, Algorithm::kOptics, Algorithm::kDbscan}) {
    if (algorithm_name(a) == name) return a;
  }
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

AlgorithmSpec study_spec(Algorithm algorithm, std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::kKMeans: {
      KMeansParams p;
      p.k = 10;
      p.seed = seed;
      return AlgorithmSpec::kmeans(p);
    }
    case Algorithm::kMiniBatchKMeans: {
      MiniBatchParams p;
      p.k = 10;
      p.batch_size = 100;
      p.seed = seed;
      return AlgorithmSpec::minibatch(p);
    }
    case Algorithm::kOptics: {
      OpticsSpec p;
      p.params.eps_km = 5.0;
      p.params.min_samples = 300;
      p.cut_eps_km = 5.0;
      return AlgorithmSpec::optics(p);
    }
    case Algorithm::kDbscan: {
      DensityParams p;
      p.eps_km = 5.0;
      p.min_samples = 300;
      return AlgorithmSpec::dbscan(p);
    }
  }
  throw InvalidArgument("unknown algorithm");
}

Labeling run_algorithm(const AlgorithmSpec& spec, const Dataset& dataset) {
  switch (spec.algorithm) {
    case Algorithm::kKMeans:
      return kmeans_fit(dataset, std::get<KMeansParams>(spec.params)).second;
    case Algorithm::kMiniBatchKMeans:
      return minibatch_kmeans_fit(dataset, std::get<MiniBatchParams>(spec.params)).second;
    case Algorithm::kOptics: {
      const auto& p = std::get<OpticsSpec>(spec.params);
      return extract_dbscan_cut(optics(dataset, p.params), p.cut_eps_km, p.params.min_samples);
    }
    case Algorithm::kDbscan:
      return dbscan(dataset, std::get<DensityParams>(spec.params));
  }
  throw InvalidArgument("unknown algorithm");
}

double aggregate(std::vector<double> runs, Aggregation aggregation) {
  if (runs.empty()) throw InvalidArgument("aggregate: no runs");
  switch (aggregation) {
    case Aggregation::kMin:
      return *std::min_element(runs.begin(), runs.end());
    case Aggregation::kMean:
      return std::accumulate(runs.begin(), runs.end(), 0.0) / static_cast<double>(runs.size());
    case Aggregation::kMedian:
      break;
  }
  std::sort(runs.begin(), runs.end());
  const std::size_t mid = runs.size() / 2;
  return runs.size() % 2 ? runs[mid] : 0.5 * (runs[mid - 1] + runs[mid]);
}

BenchResult time_callable(const std::string& name, const std::function<void(const Dataset&)>& fit,
                          const Dataset& dataset, int repetitions, Aggregation aggregation) {
  if (repetitions < 1) throw InvalidArgument("time_algorithm: repetitions must be at least 1");
  using Clock = std::chrono::steady_clock;

  BenchResult result;
  result.algorithm = name;
  result.n_points = dataset.n();
  result.repetitions = repetitions;
  result.aggregation = aggregation;
  result.dataset_checksum = dataset_checksum(dataset);

  fit(dataset);  // warmup
  for (int r = 0; r < repetitions; ++r) {
    const auto start = Clock::now();
    fit(dataset);
    const auto stop = Clock::now();
    // Clamp to one tick so seconds stays strictly positive on coarse clocks.
    const double s = std::chrono::duration<double>(stop - start).count();
    result.runs.push_back(std::max(s, 1e-9));
  }
  result.seconds = aggregate(result.runs, aggregation);
  return result;
}

BenchResult time_algorithm(const AlgorithmSpec& spec, const Dataset& dataset, int repetitions,
                           Aggregation aggregation) {
  return time_callable(
      algorithm_name(spec.algorithm), [&spec](const Dataset& d) { (void)run_algorithm(spec, d); },
      dataset, repetitions, aggregation);
}

ScalingTable scaling_suite(const Dataset& dataset, const std::vector<std::size_t>& sizes,
                           const std::vector<AlgorithmSpec>& algorithms, std::uint64_t seed,
                           int repetitions) {
  for (std::size_t size : sizes) {
    if (size > dataset.n()) {
      throw InvalidArgument("bench size " + std::to_string(size) + " exceeds dataset size " +
                            std::to_string(dataset.n()));
    }
  }
  if (repetitions < 1) throw InvalidArgument("time_algorithm: repetitions must be at least 1");

  ScalingTable table;
  table.sizes = sizes;
  for (const auto& spec : algorithms) table.algorithms.push_back(spec.algorithm);
  for (std::size_t size : sizes) {
    const Dataset tier = subsample(dataset, size, seed);
    auto& row = table.cells.emplace_back();
    for (const auto& spec : algorithms) row.push_back(time_algorithm(spec, tier, repetitions));
  }
  return table;
}

void write_bench_csv(std::ostream& out, const ScalingTable& table) {
  std::vector<std::size_t> columns;
  for (auto a : {Algorithm::kKMeans, Algorithm::kMiniBatchKMeans, Algorithm::kOptics, Algorithm::kDbscan}) {
    auto it = std::find(table.algorithms.begin(), table.algorithms.end(), a);
    if (it != table.algorithms.end()) {
      columns.push_back(static_cast<std::size_t>(it - table.algorithms.begin()));
    }
  }
  out << "n_points";
  for (std::size_t c : columns) out << ',' << algorithm_name(table.algorithms[c]);
  out << '\n';
  char buf[64];
  for (std::size_t s = 0; s < table.sizes.size(); ++s) {
    out << table.sizes[s];
    for (std::size_t c : columns) {
      std::snprintf(buf, sizeof buf, "%.3f", table.cells[s][c].seconds);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace hotspot
