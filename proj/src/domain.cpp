#include "platelab/domain.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "platelab/errors.hpp"

namespace platelab {

DomainConfig validate(const DomainConfig& config) {
  const double length = config.length;
  const double a = config.interface_a;
  const double b = config.interface_b;
  if (!std::isfinite(length) || !std::isfinite(a) || !std::isfinite(b)) {
    throw GeometryError("domain: non-finite geometry");
  }
  if (!(0.0 < a && a < b && b < length)) {
    throw GeometryError("domain: require 0 < interface_a < interface_b < length");
  }
  if (!std::isfinite(config.rho) || config.rho < 0.0) {
    throw ParameterError("domain: rho must be finite and non-negative");
  }
  for (int count : config.elements_per_region) {
    if (count < 1) throw ParameterError("domain: element counts must be at least 1");
  }
  return config;
}

DomainConfig refined(const DomainConfig& config, int factor) {
  if (factor < 1) throw ParameterError("domain: refinement factor must be at least 1");
  DomainConfig out = config;
  for (int& count : out.elements_per_region) count *= factor;
  return out;
}

Mesh1D build_mesh(const DomainConfig& config) {
  validate(config);
  const std::array<double, 4> breaks{0.0, config.interface_a, config.interface_b, config.length};
  const auto [n_left, n_mid, n_right] = config.elements_per_region;
  Mesh1D mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(n_left + n_mid + n_right) + 1);
  mesh.nodes.push_back(0.0);
  for (std::size_t r = 0; r < 3; ++r) {
    const int count = config.elements_per_region[r];
    const double lo = breaks[r];
    const double hi = breaks[r + 1];
    Region tag = Region::Damped;
    switch (config.layout) {
      case Layout::Transmission: tag = r == 1 ? Region::Undamped : Region::Damped; break;
      case Layout::AllDamped: tag = Region::Damped; break;
      case Layout::AllUndamped: tag = Region::Undamped; break;
    }
    for (int i = 1; i <= count; ++i) {
      // Region end points are copied exactly so that a, b are nodes.
      const double x = i == count ? hi : lo + (hi - lo) * static_cast<double>(i) / count;
      mesh.nodes.push_back(x);
      mesh.element_region.push_back(tag);
    }
    if (r == 0) mesh.node_a = mesh.nodes.size() - 1;
    if (r == 1) mesh.node_b = mesh.nodes.size() - 1;
  }
  return mesh;
}

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::Transmission: return "transmission";
    case Layout::AllDamped: return "all_damped";
    case Layout::AllUndamped: return "all_undamped";
  }
  return "unknown";
}

std::string to_string(Region region) { return region == Region::Damped ? "damped" : "undamped"; }

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("config: bad number for '" + key + "': " + text);
  return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("config: bad integer for '" + key + "': " + text);
  return value;
}

int parse_count(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < 0 || v > 1'000'000) throw ConfigError("config: element count out of range for '" + key + "'");
  return static_cast<int>(v);
}

Layout parse_layout(const std::string& text) {
  if (text == "transmission") return Layout::Transmission;
  if (text == "all_damped") return Layout::AllDamped;
  if (text == "all_undamped") return Layout::AllUndamped;
  throw ConfigError("config: unknown layout '" + text + "'");
}

// Shortest text that round-trips.
std::string format_real(double v) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

}  // namespace

DomainConfig parse_config(std::istream& in) {
  DomainConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config: repeated key '" + key + "'");
    if (key == "length") {
      config.length = parse_real(key, value);
    } else if (key == "interface_a") {
      config.interface_a = parse_real(key, value);
    } else if (key == "interface_b") {
      config.interface_b = parse_real(key, value);
    } else if (key == "rho") {
      config.rho = parse_real(key, value);
    } else if (key == "n_left") {
      config.elements_per_region[0] = parse_count(key, value);
    } else if (key == "n_mid") {
      config.elements_per_region[1] = parse_count(key, value);
    } else if (key == "n_right") {
      config.elements_per_region[2] = parse_count(key, value);
    } else if (key == "layout") {
      config.layout = parse_layout(value);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("config: seed must be non-negative");
      config.seed = static_cast<std::uint64_t>(s);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return validate(config);
}

DomainConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

std::string format_config(const DomainConfig& config) {
  std::ostringstream os;
  os << "length = " << format_real(config.length) << '\n'
     << "interface_a = " << format_real(config.interface_a) << '\n'
     << "interface_b = " << format_real(config.interface_b) << '\n'
     << "rho = " << format_real(config.rho) << '\n'
     << "n_left = " << config.elements_per_region[0] << '\n'
     << "n_mid = " << config.elements_per_region[1] << '\n'
     << "n_right = " << config.elements_per_region[2] << '\n'
     << "layout = " << to_string(config.layout) << '\n'
     << "seed = " << config.seed << '\n';
  return os.str();
}

}  // namespace platelab
