// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "../geojson_schema.hpp"
#include "../oracles.hpp"
#include "hotspot/bench.hpp"
#include "hotspot/density.hpp"
#include "hotspot/geo.hpp"
#include "hotspot/partitional.hpp"
#include "hotspot/validity.hpp"
#include "json.hpp"

using namespace hotspot;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// The random datasets behind criteria 1 and 2.
struct DensityCase {
  Dataset dataset;
  DensityParams params;
};

std::vector<DensityCase> density_cases() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<std::size_t> size(1, 200), ms(1, 15);
  std::uniform_real_distribution<double> eps(0.3, 8.0);
  std::vector<DensityCase> cases;
  for (int i = 0; i < 50; ++i) {
    DensityCase c;
    c.dataset.points = oracle::random_cloud(rng, size(rng));
    c.params.eps_km = eps(rng);
    c.params.min_samples = ms(rng);
    cases.push_back(std::move(c));
  }
  return cases;
}

Outcome dbscan_oracle() {
  const auto start = Clock::now();
  int matched = 0;
  for (const auto& c : density_cases()) {
    const auto got = dbscan(c.dataset, c.params);
    if (got.labels == oracle::dbscan(c.dataset.points, c.params.eps_km, c.params.min_samples)) ++matched;
  }
  const double t = seconds_since(start);
  return {matched == 50 && t < 30.0, std::to_string(matched) + "/50 exact, " + fmt("%.2f s", t)};
}

Outcome optics_consistency() {
  int core_equal = 0, partition_equal = 0;
  for (const auto& c : density_cases()) {
    DensityParams bounded = c.params;
    bounded.max_eps_km = c.params.eps_km;
    const auto ordering = optics(c.dataset, bounded);
    const auto core = core_points(c.dataset, c.params);
    bool same_core = true;
    for (std::size_t i = 0; i < core.size(); ++i) {
      same_core = same_core && (std::isfinite(ordering.core_distance[i]) == core[i]);
    }
    core_equal += same_core ? 1 : 0;
    const auto cut = extract_dbscan_cut(ordering, c.params.eps_km, c.params.min_samples);
    const auto db = dbscan(c.dataset, c.params);
    partition_equal += oracle::same_partition(cut.labels, db.labels, core) ? 1 : 0;
  }
  return {core_equal == 50 && partition_equal == 50,
          "core sets " + std::to_string(core_equal) + "/50, core partitions " + std::to_string(partition_equal) +
              "/50"};
}

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k, bool with_noise) {
  std::uniform_int_distribution<int> pick(with_noise ? -1 : 0, k - 1);
  std::vector<int> labels(n);
  for (;;) {
    for (int& l : labels) l = pick(rng);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
      if (l >= 0) ++counts[static_cast<std::size_t>(l)];
    }
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; }) &&
        std::any_of(counts.begin(), counts.end(), [](int c) { return c > 1; })) {
      return labels;
    }
  }
}

// The random (dataset, labeling) pairs behind criteria 3 and 4.
std::vector<std::pair<Dataset, Labeling>> validity_cases() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> size(8, 300);
  std::uniform_int_distribution<int> kdist(2, 7);
  std::vector<std::pair<Dataset, Labeling>> cases;
  for (int i = 0; i < 50; ++i) {
    Dataset ds{oracle::random_cloud(rng, size(rng)), ""};
    const int k = std::min<int>(kdist(rng), static_cast<int>(ds.n()) - 2);
    Labeling l = make_labeling(random_labels(rng, ds.n(), k, i % 2 == 1));
    cases.emplace_back(std::move(ds), std::move(l));
  }
  return cases;
}

Outcome validity_oracles() {
  int ok = 0;
  for (const auto& [ds, l] : validity_cases()) {
    const bool s = rel_close(silhouette_score(ds, l), oracle::silhouette(ds.points, l.labels), 1e-9);
    const bool db = rel_close(davies_bouldin(ds, l).score, oracle::davies_bouldin(ds.points, l.labels), 1e-9);
    const bool ch = rel_close(calinski_harabasz(ds, l).chi, oracle::calinski_harabasz(ds.points, l.labels), 1e-9);
    ok += (s && db && ch) ? 1 : 0;
  }
  Dataset fixture;
  for (double x : {0.0, 1.0, 10.0, 11.0}) fixture.points.push_back({35.0, -80.0 + x});
  const Labeling fl = make_labeling({0, 0, 1, 1});
  const double s = silhouette_score(fixture, fl);
  const double db = davies_bouldin(fixture, fl).score;
  const double chi = calinski_harabasz(fixture, fl).chi;
  const bool fixtures = std::abs(s - 0.899749) <= 1e-6 && std::abs(db - 0.1) <= 1e-12 &&
                        std::abs(chi - 200.0) <= 1e-9;
  return {ok == 50 && fixtures, std::to_string(ok) + "/50 within 1e-9; fixture s=" + fmt("%.6f", s) +
                                    " db=" + fmt("%.15g", db) + " chi=" + fmt("%.12g", chi)};
}

Outcome dispersion_identity() {
  int ok = 0, runs = 0;
  double worst = 0.0;
  auto check = [&](const Dataset& ds, const Labeling& l) {
    ++runs;
    try {
      const auto st = calinski_harabasz(ds, l);
      const double rel = std::abs(st.ss_b + st.ss_w - st.tss) / st.tss;
      worst = std::max(worst, rel);
      ok += rel <= 1e-9 ? 1 : 0;
    } catch (const std::logic_error&) {
      // In-library cross-check of the between-cluster sum failed.
    }
  };
  for (const auto& [ds, l] : validity_cases()) check(ds, l);
  const Dataset hot = synth_hotspots(20000, 3);
  for (int k : {2, 5, 10}) check(hot, kmeans_fit(hot, {.k = k, .seed = 1}).second);
  check(hot, dbscan(hot, {.eps_km = 5, .min_samples = 100}));
  return {ok == runs, std::to_string(ok) + "/" + std::to_string(runs) + " runs, worst relative gap " +
                          fmt("%.2e", worst)};
}

Outcome haversine_forms() {
  const double antipodal = haversine_km({0, 0}, {0, 180});
  const double meridian = haversine_km({35, -80}, {36, -80});
  const bool a = rel_close(antipodal, std::numbers::pi * 6371.0, 1e-6);
  const bool m = rel_close(meridian, 6371.0 * std::numbers::pi / 180.0, 1e-6);
  const bool r = km_to_radians(5.0) == 5.0 / 6371.0;
  return {a && m && r, "antipodal " + fmt("%.9f", antipodal) + " km, meridian degree " + fmt("%.9f", meridian) +
                           " km, km_to_radians(5) " + (r ? "exact" : "inexact")};
}

Outcome k_selection() {
  const auto start = Clock::now();
  const std::vector<GeoPoint> centers{{35.0, -80.0}, {35.0, -78.5}, {36.2, -79.2}, {34.0, -79.0}, {36.0, -80.8}};
  const double spread_km = 4.0;
  double min_sep = INFINITY;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) min_sep = std::min(min_sep, haversine_km(centers[i], centers[j]));
  }
  int elbow = 0, silhouette = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto [ds, truth] = synth_blobs(100, centers, spread_km, seed);
    elbow += select_k_elbow(ds, 2, 10, seed).chosen_k == 5 ? 1 : 0;
    silhouette += select_k_silhouette(ds, 2, 10, seed).chosen_k == 5 ? 1 : 0;
  }
  const double t = seconds_since(start);
  const bool separated = min_sep >= 20.0 * spread_km;
  return {separated && elbow >= 9 && silhouette >= 9 && t < 60.0,
          "elbow " + std::to_string(elbow) + "/10, silhouette " + std::to_string(silhouette) + "/10, separation " +
              fmt("%.0f", min_sep / spread_km) + "x spread, " + fmt("%.2f s", t)};
}

Outcome blob_recovery() {
  const auto [ds, truth] = synth_blobs(300, {{35.78, -78.64}, {35.23, -80.84}}, 3.0, 42);
  const auto km = kmeans_fit(ds, {.k = 2, .seed = 42}).second;
  const auto db = dbscan(ds, {.eps_km = 5, .min_samples = 10});
  const double km_agree = oracle::best_agreement(km.labels, truth.labels, 2);
  const double db_agree = db.n_clusters == 2 ? oracle::best_agreement(db.labels, truth.labels, 2) : 0.0;
  return {km_agree == 1.0 && db_agree == 1.0 && db.n_noise() == 0,
          "kmeans agreement " + fmt("%.4f", km_agree) + ", dbscan agreement " + fmt("%.4f", db_agree) + " with " +
              std::to_string(db.n_noise()) + " noise"};
}

Outcome timing_order() {
  const auto start = Clock::now();
  std::vector<AlgorithmSpec> specs;
  for (auto a : {Algorithm::kKMeans, Algorithm::kMiniBatchKMeans, Algorithm::kOptics, Algorithm::kDbscan}) {
    specs.push_back(study_spec(a, 0));
  }
  int density_order = 0, partition_order = 0, both = 0;
  std::string sample;
  for (std::uint64_t run = 1; run <= 5; ++run) {
    const Dataset ds = synth_hotspots(30000, run);
    const auto table = scaling_suite(ds, {30000}, specs, run, 3);
    const auto& row = table.cells[0];
    const double km = row[0].seconds, mb = row[1].seconds, op = row[2].seconds, db = row[3].seconds;
    const bool d = db < op, p = mb <= km;
    density_order += d ? 1 : 0;
    partition_order += p ? 1 : 0;
    both += (d && p) ? 1 : 0;
    if (run == 1) {
      sample = "kmeans " + fmt("%.3f", km) + " minibatch " + fmt("%.3f", mb) + " optics " + fmt("%.3f", op) +
               " dbscan " + fmt("%.3f", db);
    }
  }
  const Dataset ten = synth_hotspots(10000, 9);
  const double km10 = time_algorithm(study_spec(Algorithm::kKMeans, 0), ten, 3).seconds;
  const double t = seconds_since(start);
  const bool band = km10 >= 0.01 && km10 <= 10.0;
  return {both >= 4 && band && t < 600.0,
          "dbscan<optics " + std::to_string(density_order) + "/5, minibatch<=kmeans " +
              std::to_string(partition_order) + "/5, both " + std::to_string(both) + "/5; kmeans@10k " +
              fmt("%.4f s", km10) + (band ? " (inside" : " (outside") + " the 0.01-10 s band); run 1 [" + sample + "]; " + fmt("%.1f s", t)};
}

Outcome density_beats_partitional() {
  auto [ds, truth] = synth_blobs(950, {{35.78, -78.64}, {35.23, -80.84}}, 3.0, 5);
  const Dataset noise = synth_uniform(100, {34.9, -81.2}, {36.1, -78.2}, 6);
  ds.points.insert(ds.points.end(), noise.points.begin(), noise.points.end());
  const auto db = dbscan(ds, {.eps_km = 3, .min_samples = 15});
  const auto km = kmeans_fit(ds, {.k = db.n_clusters, .seed = 5}).second;
  if (db.n_clusters < 2) return {false, "dbscan found " + std::to_string(db.n_clusters) + " clusters"};
  const double s_db = silhouette_score(ds, db), s_km = silhouette_score(ds, km);
  const double d_db = davies_bouldin(ds, db).score, d_km = davies_bouldin(ds, km).score;
  return {s_db > s_km && d_db < d_km,
          "k=" + std::to_string(db.n_clusters) + ", noise " + std::to_string(db.n_noise()) + "; silhouette dbscan " +
              fmt("%.4f", s_db) + " vs kmeans " + fmt("%.4f", s_km) + "; davies-bouldin dbscan " +
              fmt("%.4f", d_db) + " vs kmeans " + fmt("%.4f", d_km)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli_binary(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + HOTSPOT_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  return std::system(cmd.c_str());
}

// Runs the pipeline into `dir` and returns an error message, or empty on success.
std::string cli_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string input = std::string(HOTSPOT_DATA_DIR) + "/two_blobs.csv";
  const std::string common = "--input \"" + input + "\" --out-dir \"" + dir.string() +
                             "\" --seed 7 --k 2 --minibatch-k 2 --min-samples 20";
  if (run_cli_binary("cluster " + common, dir / "cluster.log") != 0) return "cluster failed";
  if (run_cli_binary("evaluate " + common, dir / "evaluate.log") != 0) return "evaluate failed";
  if (run_cli_binary("export " + common + " --labels \"" + (dir / "dbscan_labels.csv").string() +
                         "\" --output \"" + (dir / "export.geojson").string() + "\"",
                     dir / "export.log") != 0) {
    return "export failed";
  }
  return {};
}

Outcome end_to_end_cli() {
  const fs::path root = fs::temp_directory_path() / "hotspot_acceptance";
  const fs::path a = root / "a", b = root / "b";
  for (const auto& dir : {a, b}) {
    if (auto e = cli_pipeline(dir); !e.empty()) return {false, e};
  }

  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() == ".log") continue;
    ++compared;
    if (slurp(entry.path()) != slurp(b / entry.path().filename())) {
      return {false, entry.path().filename().string() + " differs between runs"};
    }
  }

  const char* algorithms[] = {"kmeans", "minibatch_kmeans", "dbscan", "optics"};
  for (const char* name : algorithms) {
    const auto doc = nlohmann::json::parse(slurp(a / (std::string(name) + ".geojson")));
    if (auto e = schema::check_point_collection(doc); !e.empty()) return {false, std::string(name) + ": " + e};

    std::istringstream summary(slurp(a / (std::string(name) + "_summary.csv")));
    std::string line;
    std::getline(summary, line);
    if (line != "size,label") return {false, std::string(name) + ": bad summary header"};
    long prev_size = -1, prev_label = -1;
    while (std::getline(summary, line)) {
      const long size = std::stol(line.substr(0, line.find(',')));
      const long label = std::stol(line.substr(line.find(',') + 1));
      if (prev_size >= 0 && (size > prev_size || (size == prev_size && label < prev_label))) {
        return {false, std::string(name) + ": summary out of order"};
      }
      prev_size = size;
      prev_label = label;
    }
  }
  if (auto e = schema::check_point_collection(nlohmann::json::parse(slurp(a / "export.geojson"))); !e.empty()) {
    return {false, "export: " + e};
  }

  const auto report = nlohmann::json::parse(slurp(a / "validity_report.json"));
  for (const char* name : algorithms) {
    if (!report.contains(name)) return {false, std::string("report lacks ") + name};
    for (const char* key : {"silhouette", "davies_bouldin", "calinski_harabasz", "n_clusters", "n_noise", "status"}) {
      if (!report[name].contains(key)) return {false, std::string("report row ") + name + " lacks " + key};
    }
  }
  return {true, std::to_string(compared) + " output files byte-identical across two runs; GeoJSON, summaries and "
                                           "report complete"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dbscan matches quadratic oracle", dbscan_oracle},
      {"optics core set and cut agree with dbscan", optics_consistency},
      {"validity indices match oracles and fixtures", validity_oracles},
      {"between plus within dispersion equals total", dispersion_identity},
      {"haversine closed forms", haversine_forms},
      {"elbow and silhouette choose k = 5", k_selection},
      {"two-blob recovery by k-means and dbscan", blob_recovery},
      {"timing order at 30k points", timing_order},
      {"dbscan beats k-means on noisy blobs", density_beats_partitional},
      {"cli pipeline deterministic and well formed", end_to_end_cli},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
