#include "hotspot/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw InvalidArgument("invalid value '" + value + "' for " + key);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value);
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || std::isnan(out)) bad_value(key, value);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>) {
      out += items[i];
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename Member>
Field field(std::string key, Member RunConfig::*member) {
  Field f;
  f.key = key;
  f.get = [member](const RunConfig& c) -> std::string {
    const auto& v = c.*member;
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, bool>) {
      return v ? "true" : "false";
    } else if constexpr (std::is_same_v<T, double>) {
      return format_real(v);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>> ||
                         std::is_same_v<T, std::vector<std::size_t>>) {
      return join(v);
    } else {
      return std::to_string(v);
    }
  };
  f.set = [member, key](RunConfig& c, const std::string& value) {
    auto& v = c.*member;
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, std::string>) {
      v = value;
    } else if constexpr (std::is_same_v<T, bool>) {
      v = parse_bool(key, value);
    } else if constexpr (std::is_same_v<T, double>) {
      v = parse_real(key, value);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      v = split_list(value);
    } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
      v.clear();
      for (const auto& item : split_list(value)) v.push_back(parse_integer<std::size_t>(key, item));
    } else {
      v = parse_integer<T>(key, value);
    }
  };
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      field("input", &RunConfig::input),
      field("lat_col", &RunConfig::lat_col),
      field("lon_col", &RunConfig::lon_col),
      field("out_dir", &RunConfig::out_dir),
      field("seed", &RunConfig::seed),
      field("dedupe", &RunConfig::dedupe),
      field("algorithms", &RunConfig::algorithms),
      field("k", &RunConfig::k),
      field("init", &RunConfig::init),
      field("max_iter", &RunConfig::max_iter),
      field("tol_km", &RunConfig::tol_km),
      field("minibatch_k", &RunConfig::minibatch_k),
      field("batch_size", &RunConfig::batch_size),
      field("n_iter", &RunConfig::n_iter),
      field("eps_km", &RunConfig::eps_km),
      field("min_samples", &RunConfig::min_samples),
      field("optics_max_eps_km", &RunConfig::optics_max_eps_km),
      field("optics_cut_eps_km", &RunConfig::optics_cut_eps_km),
      field("threads", &RunConfig::threads),
      field("exclude_noise", &RunConfig::exclude_noise),
      field("db_combine", &RunConfig::db_combine),
      field("sizes", &RunConfig::sizes),
      field("repetitions", &RunConfig::repetitions),
  };
  return kFields;
}

const Field& find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw InvalidArgument("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
  }();
  return kKeys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  find_field(key).set(config, trim(value));
}

std::string get_config_value(const RunConfig& config, const std::string& key) {
  return find_field(key).get(config);
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig config;
  apply_config_text(config, buffer.str());
  return config;
}

AlgorithmSpec algorithm_spec(const RunConfig& config, Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kKMeans: {
      KMeansParams p;
      p.k = config.k;
      p.seed = config.seed;
      p.max_iter = config.max_iter;
      p.tol_km = config.tol_km;
      p.threads = config.threads;
      if (config.init == "random") {
        p.init = KMeansInit::kRandomFromData;
      } else if (config.init == "kmeanspp") {
        p.init = KMeansInit::kKMeansPlusPlus;
      } else {
        bad_value("init", config.init);
      }
      validate(p);
      return AlgorithmSpec::kmeans(p);
    }
    case Algorithm::kMiniBatchKMeans: {
      MiniBatchParams p;
      p.k = config.minibatch_k;
      p.batch_size = config.batch_size;
      p.n_iter = config.n_iter;
      p.seed = config.seed;
      p.threads = config.threads;
      validate(p);
      return AlgorithmSpec::minibatch(p);
    }
    case Algorithm::kOptics: {
      OpticsSpec p;
      p.params.eps_km = config.eps_km;
      p.params.min_samples = config.min_samples;
      p.params.max_eps_km = config.optics_max_eps_km;
      p.params.threads = config.threads;
      p.cut_eps_km = config.optics_cut_eps_km;
      validate(p.params);
      if (!(p.cut_eps_km > 0.0) || p.cut_eps_km > p.params.max_eps_km) {
        throw InvalidArgument("optics_cut_eps_km must be positive and at most optics_max_eps_km");
      }
      return AlgorithmSpec::optics(p);
    }
    case Algorithm::kDbscan: {
      DensityParams p;
      p.eps_km = config.eps_km;
      p.min_samples = config.min_samples;
      p.threads = config.threads;
      validate(p);
      return AlgorithmSpec::dbscan(p);
    }
  }
  throw InvalidArgument("unknown algorithm");
}

ValidityOptions validity_options(const RunConfig& config) {
  ValidityOptions options;
  options.exclude_noise = config.exclude_noise;
  options.threads = config.threads;
  if (config.db_combine == "mean") {
    options.db_combine = DaviesBouldinCombine::kMean;
  } else if (config.db_combine == "half-sum") {
    options.db_combine = DaviesBouldinCombine::kHalfSum;
  } else {
    bad_value("db_combine", config.db_combine);
  }
  return options;
}

}  // namespace hotspot
