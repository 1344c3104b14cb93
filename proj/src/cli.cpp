#include "hotspot/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hotspot/bench.hpp"
#include "hotspot/config.hpp"
#include "hotspot/density.hpp"
#include "hotspot/error.hpp"
#include "hotspot/ingest.hpp"
#include "hotspot/partitional.hpp"
#include "hotspot/report.hpp"
#include "hotspot/validity.hpp"

namespace hotspot {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> kHelp = {
      {"input", "CSV file with a header row"},
      {"lat_col", "latitude column name"},
      {"lon_col", "longitude column name"},
      {"out_dir", "directory for output files"},
      {"seed", "random seed"},
      {"dedupe", "drop exact duplicate coordinates (true/false)"},
      {"algorithms", "comma-separated: kmeans,minibatch_kmeans,dbscan,optics"},
      {"k", "k-means cluster count"},
      {"init", "k-means initialisation: random | kmeanspp"},
      {"max_iter", "k-means iteration cap"},
      {"tol_km", "k-means center-shift tolerance in km"},
      {"minibatch_k", "mini-batch k-means cluster count"},
      {"batch_size", "mini-batch size"},
      {"n_iter", "mini-batch iterations"},
      {"eps_km", "DBSCAN neighbourhood radius in km"},
      {"min_samples", "DBSCAN/OPTICS minimum neighbourhood size, self included"},
      {"optics_max_eps_km", "OPTICS neighbourhood ceiling in km (inf = unbounded)"},
      {"optics_cut_eps_km", "radius of the DBSCAN-style cut through the OPTICS ordering"},
      {"threads", "worker threads for neighbour counting and assignment"},
      {"exclude_noise", "leave noise points out of the validity indices"},
      {"db_combine", "Davies-Bouldin combination: mean | half-sum"},
      {"sizes", "bench dataset sizes, comma-separated"},
      {"repetitions", "measured bench runs per cell"},
  };
  return kHelp;
}

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

Dataset load_input(const RunConfig& config, std::ostream& out) {
  if (config.input.empty()) throw InvalidArgument("--input is required");
  CsvOptions options;
  options.lat_column = config.lat_col;
  options.lon_column = config.lon_col;
  options.dedupe = config.dedupe;
  auto [dataset, report] = load_csv(config.input, options);
  out << "read " << report.rows_read << " rows: kept " << report.rows_kept << ", invalid "
      << report.rows_dropped_invalid << ", duplicate " << report.rows_dropped_duplicate << '\n';
  if (dataset.n() == 0) throw DataError(config.input + ": no valid rows");
  return dataset;
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw DataError("cannot create output directory '" + config.out_dir + "': " + ec.message());
}

template <typename Writer>
void write_file(const fs::path& path, std::vector<fs::path>& written, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  written.push_back(path);
  write_text_file(path, buffer.str());
}

int cmd_cluster(const RunConfig& config, std::ostream& out) {
  const Dataset dataset = load_input(config, out);
  std::vector<std::pair<Algorithm, AlgorithmSpec>> specs;
  for (const auto& name : config.algorithms) {
    const Algorithm a = parse_algorithm(name);
    specs.emplace_back(a, algorithm_spec(config, a));
  }
  if (specs.empty()) throw InvalidArgument("no algorithms selected");
  ensure_out_dir(config);

  std::vector<fs::path> written;
  try {
    for (const auto& [algorithm, spec] : specs) {
      const std::string name = algorithm_name(algorithm);
      const fs::path base = fs::path(config.out_dir) / name;
      Labeling labeling;
      if (algorithm == Algorithm::kOptics) {
        const auto& p = std::get<OpticsSpec>(spec.params);
        const OpticsOrdering ordering = optics(dataset, p.params);
        write_file(base.string() + "_reachability.csv", written,
                   [&](std::ostream& os) { write_reachability_csv(os, ordering); });
        labeling = extract_dbscan_cut(ordering, p.cut_eps_km, p.params.min_samples);
      } else {
        labeling = run_algorithm(spec, dataset);
      }
      const ClusterSummary summary = summarize(name, labeling);
      write_file(base.string() + "_labels.csv", written,
                 [&](std::ostream& os) { write_labels_csv(os, labeling); });
      write_file(base.string() + "_summary.csv", written,
                 [&](std::ostream& os) { write_summary_csv(os, summary); });
      written.push_back(base.string() + ".geojson");
      export_geojson(dataset, labeling, base.string() + ".geojson");

      out << name << ": " << summary.rows.size() << " clusters, " << summary.n_noise << " noise\n";
      for (const auto& row : summary.rows) out << "  " << row.size << " (" << row.label << ")\n";
    }
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
  return kExitOk;
}

std::string stem_name(const fs::path& path) {
  std::string stem = path.stem().string();
  constexpr std::string_view kSuffix = "_labels";
  if (stem.size() > kSuffix.size() && stem.ends_with(kSuffix)) stem.resize(stem.size() - kSuffix.size());
  return stem;
}

std::string format_score(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

int cmd_evaluate(const RunConfig& config, const std::vector<std::string>& label_args,
                 const std::string& report_name, std::ostream& out) {
  const Dataset dataset = load_input(config, out);
  const ValidityOptions options = validity_options(config);

  std::vector<std::pair<std::string, fs::path>> sources;
  for (const auto& arg : label_args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      sources.emplace_back(stem_name(arg), arg);
    } else {
      sources.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
    }
  }
  if (sources.empty()) {
    for (const auto& name : config.algorithms) {
      const fs::path candidate = fs::path(config.out_dir) / (name + "_labels.csv");
      if (fs::exists(candidate)) sources.emplace_back(name, candidate);
    }
  }
  if (sources.empty()) throw InvalidArgument("no labeling files given or found in " + config.out_dir);

  std::vector<std::pair<std::string, Labeling>> labelings;
  for (const auto& [name, path] : sources) {
    Labeling labeling = read_labels_csv(path);
    if (labeling.size() != dataset.n()) {
      throw DataError(path.string() + ": " + std::to_string(labeling.size()) + " labels for " +
                      std::to_string(dataset.n()) + " points");
    }
    labelings.emplace_back(name, std::move(labeling));
  }

  const ValidityReport report = validity_report(dataset, labelings, options);
  ensure_out_dir(config);
  write_text_file(fs::path(config.out_dir) / report_name, to_json(report).dump(2) + "\n");

  for (const auto& row : report.rows) {
    out << row.name << ": silhouette " << format_score(row.silhouette) << ", davies_bouldin "
        << format_score(row.davies_bouldin) << ", calinski_harabasz " << format_score(row.calinski_harabasz)
        << " [" << row.status << "]\n";
  }
  return kExitOk;
}

int cmd_select_k(const RunConfig& config, int k_min, int k_max, const std::string& method,
                 std::ostream& out) {
  const Dataset dataset = load_input(config, out);
  KSelection selection;
  if (method == "elbow") {
    selection = select_k_elbow(dataset, k_min, k_max, config.seed);
  } else if (method == "silhouette") {
    selection = select_k_silhouette(dataset, k_min, k_max, config.seed);
  } else {
    throw InvalidArgument("unknown method '" + method + "'");
  }
  ensure_out_dir(config);
  std::ostringstream csv;
  csv << "k,score\n";
  char buf[32];
  for (std::size_t i = 0; i < selection.ks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", selection.scores[i]);
    csv << selection.ks[i] << ',' << buf << '\n';
  }
  write_text_file(fs::path(config.out_dir) / ("select_k_" + method + ".csv"), csv.str());
  out << "chosen k: " << selection.chosen_k << '\n';
  return kExitOk;
}

int cmd_bench(const RunConfig& config, std::size_t synthetic, const std::string& output, std::ostream& out) {
  const Dataset dataset = synthetic > 0 ? synth_hotspots(synthetic, config.seed) : load_input(config, out);
  std::vector<AlgorithmSpec> specs;
  for (const auto& name : config.algorithms) specs.push_back(algorithm_spec(config, parse_algorithm(name)));
  if (specs.empty()) throw InvalidArgument("no algorithms selected");
  if (config.sizes.empty()) throw InvalidArgument("no bench sizes given");

  const ScalingTable table = scaling_suite(dataset, config.sizes, specs, config.seed, config.repetitions);
  std::ostringstream csv;
  write_bench_csv(csv, table);
  ensure_out_dir(config);
  write_text_file(fs::path(config.out_dir) / output, csv.str());
  out << csv.str();
  return kExitOk;
}

int cmd_export(const RunConfig& config, const std::string& labels_path, std::string output,
               std::ostream& out) {
  const Dataset dataset = load_input(config, out);
  const Labeling labeling = read_labels_csv(labels_path);
  if (labeling.size() != dataset.n()) {
    throw DataError(labels_path + ": " + std::to_string(labeling.size()) + " labels for " +
                    std::to_string(dataset.n()) + " points");
  }
  if (output.empty()) {
    ensure_out_dir(config);
    output = (fs::path(config.out_dir) / (stem_name(labels_path) + ".geojson")).string();
  }
  export_geojson(dataset, labeling, output);
  out << "wrote " << output << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geospatial hotspot clustering: k-means, mini-batch k-means, DBSCAN and OPTICS"};
  app.name("hotspot");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string write_config_path;
  app.add_option("--config", config_path, "flat key = value file; flags override it");
  app.add_option("--write-config", write_config_path, "save the effective configuration to this file");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : config_keys()) {
    flag_options[key] = app.add_option("--" + dashed(key), flag_values[key], flag_help().at(key));
  }

  auto* cluster = app.add_subcommand("cluster", "cluster the input and write labels, summaries and GeoJSON");

  auto* evaluate = app.add_subcommand("evaluate", "score labeling files with the three validity indices");
  std::vector<std::string> label_args;
  std::string report_name = "validity_report.json";
  evaluate->add_option("--labels", label_args, "labeling files, optionally name=path");
  evaluate->add_option("--report", report_name, "report file name inside out-dir");

  auto* select_k = app.add_subcommand("select-k", "choose k with the elbow or silhouette method");
  int k_min = 2;
  int k_max = 10;
  std::string method = "elbow";
  select_k->add_option("--k-min", k_min, "smallest k");
  select_k->add_option("--k-max", k_max, "largest k");
  select_k->add_option("--method", method, "elbow | silhouette");

  auto* bench = app.add_subcommand("bench", "time every algorithm over dataset-size tiers");
  std::size_t synthetic = 0;
  std::string bench_output = "bench.csv";
  bench->add_option("--synthetic", synthetic, "use N synthetic crash-like points instead of --input");
  bench->add_option("--output", bench_output, "CSV file name inside out-dir");

  auto* export_cmd = app.add_subcommand("export", "write a labeling file as GeoJSON");
  std::string export_labels;
  std::string export_output;
  export_cmd->add_option("--labels", export_labels, "labeling file")->required();
  export_cmd->add_option("--output", export_output, "GeoJSON path (default: out-dir/<name>.geojson)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArguments;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    for (const auto& key : config_keys()) {
      if (flag_options[key]->count() > 0) set_config_value(config, key, flag_values[key]);
    }
    if (!write_config_path.empty()) write_text_file(write_config_path, to_config_text(config));

    if (cluster->parsed()) return cmd_cluster(config, out);
    if (evaluate->parsed()) return cmd_evaluate(config, label_args, report_name, out);
    if (select_k->parsed()) return cmd_select_k(config, k_min, k_max, method, out);
    if (bench->parsed()) return cmd_bench(config, synthetic, bench_output, out);
    if (export_cmd->parsed()) return cmd_export(config, export_labels, export_output, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArguments;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitBadArguments;
}

}  // namespace hotspot
