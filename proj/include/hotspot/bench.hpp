#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "hotspot/density.hpp"
#include "hotspot/ingest.hpp"
#include "hotspot/labeling.hpp"
#include "hotspot/partitional.hpp"

namespace hotspot {

enum class Algorithm { kKMeans, kMiniBatchKMeans, kOptics, kDbscan };

// Canonical names, also the bench CSV column names: kmeans, minibatch_kmeans, optics, dbscan.
std::string algorithm_name(Algorithm algorithm);
// Throws InvalidArgument for unknown names.
Algorithm parse_algorithm(const std::string& name);

struct OpticsSpec {
  DensityParams params;
  double cut_eps_km = 5.0;  // extraction radius, at most params.max_eps_km
};

// One algorithm with its parameters.
struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::kKMeans;
  std::variant<KMeansParams, MiniBatchParams, OpticsSpec, DensityParams> params;

  static AlgorithmSpec kmeans(KMeansParams p) { return {Algorithm::kKMeans, p}; }
  static AlgorithmSpec minibatch(MiniBatchParams p) { return {Algorithm::kMiniBatchKMeans, p}; }
  static AlgorithmSpec optics(OpticsSpec p) { return {Algorithm::kOptics, p}; }
  static AlgorithmSpec dbscan(DensityParams p) { return {Algorithm::kDbscan, p}; }
};

// Parameter set used in the original hotspot study: k = 10, batch 100,
// eps 5 km, min_samples 300, unbounded OPTICS with a 5 km cut.
AlgorithmSpec study_spec(Algorithm algorithm, std::uint64_t seed = 0);

// Runs the full fit and returns its labeling.
Labeling run_algorithm(const AlgorithmSpec& spec, const Dataset& dataset);

enum class Aggregation { kMedian, kMin, kMean };

struct BenchResult {
  std::string algorithm;
  std::size_t n_points = 0;
  double seconds = 0.0;
  int repetitions = 0;
  Aggregation aggregation = Aggregation::kMedian;
  std::vector<double> runs;             // measured durations, in run order
  std::uint64_t dataset_checksum = 0;   // of the dataset that was timed
};

// One unmeasured warmup, then `repetitions` measured calls of `fit`.
// Throws InvalidArgument when repetitions < 1.
BenchResult time_callable(const std::string& name, const std::function<void(const Dataset&)>& fit,
                          const Dataset& dataset, int repetitions,
                          Aggregation aggregation = Aggregation::kMedian);

BenchResult time_algorithm(const AlgorithmSpec& spec, const Dataset& dataset, int repetitions = 3,
                           Aggregation aggregation = Aggregation::kMedian);

double aggregate(std::vector<double> runs, Aggregation aggregation);

struct ScalingTable {
  std::vector<std::size_t> sizes;
  std::vector<Algorithm> algorithms;      // column order
  std::vector<std::vector<BenchResult>> cells;  // [size][algorithm]
};

// Subsamples once per size (seeded) and times every algorithm on that same
// subsample. Throws InvalidArgument naming the first size above dataset.n().
ScalingTable scaling_suite(const Dataset& dataset, const std::vector<std::size_t>& sizes,
                           const std::vector<AlgorithmSpec>& algorithms, std::uint64_t seed,
                           int repetitions = 3);

// Header n_points,<algorithm columns in canonical order>, seconds to 3 decimals.
void write_bench_csv(std::ostream& out, const ScalingTable& table);

}  // namespace hotspot
