#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "uoco/harness.hpp"

namespace uoco {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
}

std::uint64_t to_seed(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (trim(value.substr(used)).empty() && value.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + value + "'");
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (in >> item) {
    item.erase(std::remove(item.begin(), item.end(), ','), item.end());
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

// "a1 a2 ... : b"
Halfspace to_halfspace(const std::string& value) {
  const auto colon = value.find(':');
  if (colon == std::string::npos) throw ConfigError("halfspace row needs 'a1 ... ad : b'");
  const std::vector<double> normal = to_list("halfspace", value.substr(0, colon));
  if (normal.empty()) throw ConfigError("halfspace row has an empty normal");
  Halfspace row;
  row.normal = Eigen::Map<const Vector>(normal.data(), static_cast<Eigen::Index>(normal.size()));
  row.offset = to_double("halfspace", trim(value.substr(colon + 1)));
  if (row.offset < 0.0) throw ConfigError("halfspace row excludes the origin (offset < 0)");
  return row;
}

}  // namespace

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::kUniversal: return "universal";
    case Algo::kUniversalSmooth: return "universal-smooth";
    case Algo::kBaseline: return "baseline";
    case Algo::kOgd: return "ogd";
    case Algo::kOns: return "ons";
  }
  return "unknown";
}

Algo parse_algo(const std::string& name) {
  const std::string v = lower(trim(name));
  if (v == "universal") return Algo::kUniversal;
  if (v == "universal-smooth") return Algo::kUniversalSmooth;
  if (v == "baseline") return Algo::kBaseline;
  if (v == "ogd") return Algo::kOgd;
  if (v == "ons") return Algo::kOns;
  throw ConfigError("unknown algo '" + name + "'");
}

void apply_setting(RunConfig& config, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  if (value.empty()) throw ConfigError("'" + key + "' has no value");

  if (key == "family") {
    config.family.kind = parse_family(value);
  } else if (key == "lambda") {
    config.family.lambda = to_double(key, value);
  } else if (key == "drift") {
    config.family.drift = to_bool(key, value);
  } else if (key == "d" || key == "dimension") {
    const long d = to_long(key, value);
    if (d < 1 || d > 4096) throw ConfigError("dimension must be in [1, 4096]");
    config.family.dimension = static_cast<int>(d);
  } else if (key == "t" || key == "horizon") {
    const long t = to_long(key, value);
    if (t < 2) throw ConfigError("horizon T must be at least 2");
    config.family.horizon = t;
  } else if (key == "seed") {
    config.family.seed = to_seed(key, value);
  } else if (key == "scale") {
    config.family.scale = to_double(key, value);
  } else if (key == "domain") {
    const std::string kind = lower(value);
    if (kind != "ball" && kind != "box" && kind != "simplex" && kind != "polytope" &&
        kind != "halfspaces") {
      throw ConfigError("unknown domain '" + value + "'");
    }
    config.domain.kind = kind;
  } else if (key == "radius") {
    config.domain.radius = to_double(key, value);
  } else if (key == "half_width") {
    config.domain.half_width = to_double(key, value);
  } else if (key == "lower") {
    config.domain.lower = to_list(key, value);
  } else if (key == "upper") {
    config.domain.upper = to_list(key, value);
  } else if (key == "simplex_scale") {
    config.domain.scale = to_double(key, value);
  } else if (key == "halfspaces") {
    const long n = to_long(key, value);
    if (n < 1) throw ConfigError("halfspaces must be positive");
    config.domain.halfspace_count = static_cast<int>(n);
  } else if (key == "halfspace") {
    config.domain.rows.push_back(to_halfspace(value));
  } else if (key == "diameter") {
    config.domain.diameter = to_double(key, value);
  } else if (key == "tolerance") {
    config.domain.tolerance = to_double(key, value);
  } else if (key == "max_sweeps") {
    config.domain.max_sweeps = static_cast<int>(to_long(key, value));
  } else if (key == "algo") {
    config.algo = parse_algo(value);
  } else if (key == "ons_projection") {
    const std::string v = lower(value);
    if (v == "exact") {
      config.ons_projection = OnsProjection::kExact;
    } else if (v == "closed_form") {
      config.ons_projection = OnsProjection::kClosedForm;
    } else {
      throw ConfigError("ons_projection must be exact or closed_form");
    }
  } else if (key == "g") {
    const double g = to_double(key, value);
    if (!(g > 0.0)) throw ConfigError("G must be positive");
    config.G = g;
  } else if (key == "out") {
    config.out = value;
  } else if (key == "summary") {
    config.summary_out = value;
  } else if (key == "timing") {
    config.timing = to_bool(key, value);
  } else if (key == "execution") {
    const std::string v = lower(value);
    if (v == "serial") {
      config.execution = Execution::kSerial;
    } else if (v == "parallel") {
      config.execution = Execution::kParallel;
    } else {
      throw ConfigError("execution must be serial or parallel");
    }
  } else {
    throw ConfigError("unknown setting '" + raw_key + "'");
  }
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in);
}

Domain build_domain(const DomainConfig& config, int dimension, std::uint64_t seed) {
  const std::string& kind = config.kind;
  if (kind == "ball") return Domain::ball(dimension, config.radius);
  if (kind == "box") {
    if (config.lower.empty() && config.upper.empty()) return Domain::cube(dimension, config.half_width);
    if (static_cast<int>(config.lower.size()) != dimension ||
        static_cast<int>(config.upper.size()) != dimension) {
      throw ConfigError("box bounds must have d entries each");
    }
    return Domain::box(Eigen::Map<const Vector>(config.lower.data(), dimension),
                       Eigen::Map<const Vector>(config.upper.data(), dimension));
  }
  if (kind == "simplex") return Domain::simplex(dimension, config.scale);
  if (kind == "polytope") {
    const int rows = config.halfspace_count > 0 ? config.halfspace_count : 2 * dimension;
    return random_polytope(dimension, rows, config.half_width, seed);
  }
  if (kind == "halfspaces") {
    if (config.rows.empty()) throw ConfigError("halfspaces domain needs halfspace rows");
    if (!(config.diameter > 0.0)) throw ConfigError("halfspaces domain needs a diameter bound");
    for (const auto& row : config.rows) {
      if (row.normal.size() != dimension) {
        throw ConfigError("halfspace row dimension does not match d");
      }
    }
    return Domain::halfspaces(config.rows, config.diameter, config.tolerance, config.max_sweeps);
  }
  throw ConfigError("unknown domain '" + kind + "'");
}

}  // namespace uoco
