#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "hotspot/error.hpp"
#include "hotspot/ingest.hpp"

using namespace hotspot;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("hotspot_ingest_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

void check_identity(const IngestReport& r) {
  CHECK(r.rows_read == r.rows_kept + r.rows_dropped_invalid + r.rows_dropped_duplicate);
}

}  // namespace

TEST_CASE("csv examples") {
  SUBCASE("out-of-range latitude is dropped") {
    const auto [ds, report] = parse_csv("Latitude,Longitude\n35.0,-80.0\n91.0,-80.0\n36.0,-79.0\n");
    CHECK(ds.n() == 2);
    CHECK(report.rows_dropped_invalid == 1);
    CHECK(ds.points[1] == GeoPoint{36.0, -79.0});
    check_identity(report);
  }
  SUBCASE("header only") {
    const auto [ds, report] = parse_csv("Latitude,Longitude\n");
    CHECK(ds.n() == 0);
    CHECK(report.rows_read == 0);
  }
  SUBCASE("dedupe") {
    const auto text = "Latitude,Longitude\n35.0,-80.0\n35.0,-80.0\n";
    const auto [ds, report] = parse_csv(text, {.dedupe = true});
    CHECK(ds.n() == 1);
    CHECK(report.rows_dropped_duplicate == 1);
    check_identity(report);
    CHECK(parse_csv(text).first.n() == 2);
  }
}

TEST_CASE("csv parsing details") {
  const auto [ds, report] = parse_csv(
      "\xEF\xBB\xBFid,\"Longitude\",Latitude,note\r\n"
      "1,-8.0e1,3.5E1,\"a, b\"\r\n"
      "2,,35,x\r\n"
      "3,-80,abc,x\r\n"
      "4,-80,+35.5\r\n"
      "\r\n"
      "5,-80\r\n");
  REQUIRE(ds.n() == 2);
  CHECK(ds.points[0] == GeoPoint{35.0, -80.0});
  CHECK(ds.points[1] == GeoPoint{35.5, -80.0});
  CHECK(report.rows_dropped_invalid == 4);
  check_identity(report);

  CHECK(split_csv_line(R"(a,"b,""c""",d)") == std::vector<std::string>{"a", "b,\"c\"", "d"});

  const auto custom = parse_csv("y,x\n1,2\n", {.lat_column = "y", .lon_column = "x"}).first;
  CHECK(custom.points == std::vector<GeoPoint>{{1, 2}});
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(parse_csv("Lat,Longitude\n1,2\n"), DataError);
  CHECK_THROWS_AS(parse_csv(""), DataError);
  CHECK_THROWS_AS(load_csv("/nonexistent/hotspot/none.csv"), DataError);
}

TEST_CASE("load_csv reads a file and is repeatable") {
  const auto path = temp_file("a.csv", "Latitude,Longitude\n35.1,-80.2\n35.3,-80.4\n");
  const auto first = load_csv(path).first;
  const auto second = load_csv(path).first;
  CHECK(first.n() == 2);
  CHECK(first == second);
  std::filesystem::remove(path);
}

TEST_CASE("report identity over random malformed csv") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> cells{"35.0", "-80.0", "", "abc", "91", "-181", "1e1", "nan",
                                       "inf", "\"35.5\"", "+10", "-0"};
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::uniform_int_distribution<int> rows(0, 40), width(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text = "Latitude,Longitude\n";
    const int n = rows(rng);
    for (int r = 0; r < n; ++r) {
      const int w = width(rng);
      for (int c = 0; c < w; ++c) {
        if (c) text += ',';
        text += cells[pick(rng)];
      }
      text += '\n';
    }
    const bool dedupe = trial % 2 == 0;
    const auto [ds, report] = parse_csv(text, {.dedupe = dedupe});
    REQUIRE(report.rows_read == static_cast<std::size_t>(n));
    REQUIRE(report.rows_kept == ds.n());
    REQUIRE(report.rows_read ==
            report.rows_kept + report.rows_dropped_invalid + report.rows_dropped_duplicate);
    for (const auto& p : ds.points) REQUIRE(is_valid(p));
  }
}

TEST_CASE("subsample") {
  const Dataset ds = synth_uniform(200, {34, -81}, {36, -79}, 1);
  CHECK(subsample(ds, 200, 9).points == ds.points);
  CHECK(subsample(ds, 0, 9).n() == 0);
  CHECK(subsample(ds, 50, 9) == subsample(ds, 50, 9));
  CHECK_THROWS_AS(subsample(ds, 201, 9), InvalidArgument);

  const Dataset sub = subsample(ds, 70, 4);
  REQUIRE(sub.n() == 70);
  // Order preserved: each point appears later in the source than the previous one.
  std::size_t cursor = 0;
  for (const auto& p : sub.points) {
    while (cursor < ds.n() && !(ds.points[cursor] == p)) ++cursor;
    REQUIRE(cursor < ds.n());
    ++cursor;
  }
}

TEST_CASE("synthetic generators") {
  SUBCASE("degenerate spread") {
    const GeoPoint c{35.5, -79.5};
    const auto [ds, truth] = synth_blobs(100, {c}, 1e-9, 2);
    for (const auto& p : ds.points) CHECK(haversine_km(p, c) <= 1e-6);
    CHECK(truth.n_clusters == 1);
  }
  SUBCASE("two centers 500 km apart") {
    const GeoPoint a{35.0, -80.0};
    const GeoPoint b{35.0 + 500.0 / kKmPerDegree, -80.0};
    CHECK(haversine_km(a, b) == doctest::Approx(500.0).epsilon(1e-9));
    const auto [ds, truth] = synth_blobs(100, {a, b}, 5.0, 8);
    REQUIRE(ds.n() == 200);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      const GeoPoint& own = truth.labels[i] == 0 ? a : b;
      const GeoPoint& other = truth.labels[i] == 0 ? b : a;
      CHECK(haversine_km(ds.points[i], own) < haversine_km(ds.points[i], other));
    }
  }
  SUBCASE("determinism") {
    CHECK(synth_blobs(30, {{35, -80}, {36, -78}}, 4.0, 5) == synth_blobs(30, {{35, -80}, {36, -78}}, 4.0, 5));
    CHECK(synth_hotspots(500, 3) == synth_hotspots(500, 3));
    CHECK_FALSE(synth_hotspots(500, 3) == synth_hotspots(500, 4));
    CHECK(synth_uniform(10, {0, 0}, {1, 1}, 1) == synth_uniform(10, {0, 0}, {1, 1}, 1));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(synth_blobs(10, {}, 1.0, 0), InvalidArgument);
    CHECK_THROWS_AS(synth_blobs(10, {{0, 0}}, 0.0, 0), InvalidArgument);
    CHECK_THROWS_AS(synth_uniform(10, {1, 0}, {0, 1}, 0), InvalidArgument);
  }
  SUBCASE("hotspots stay valid and inside the state box") {
    const Dataset ds = synth_hotspots(3000, 1);
    CHECK(ds.n() == 3000);
    for (const auto& p : ds.points) {
      REQUIRE(is_valid(p));
    }
  }
}

TEST_CASE("dataset checksum") {
  const Dataset a = synth_uniform(50, {34, -81}, {36, -79}, 1);
  Dataset b = a;
  CHECK(dataset_checksum(a) == dataset_checksum(b));
  b.points[10].lon_deg = std::nextafter(b.points[10].lon_deg, 0.0);
  CHECK(dataset_checksum(a) != dataset_checksum(b));
}
