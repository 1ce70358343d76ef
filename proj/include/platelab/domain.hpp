#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace platelab {

enum class Region { Damped, Undamped };

/// Which elements carry structural damping.
enum class Layout {
  Transmission,  ///< damped on (0,a) and (b,L), undamped on (a,b)
  AllDamped,     ///< damped everywhere, no undamped inclusion
  AllUndamped,   ///< undamped everywhere (clamped beam)
};

/// Geometry Omega = (0,L) with undamped inclusion (a,b) and damping factor rho.
struct DomainConfig {
  double length = 1.0;
  double interface_a = 0.3;
  double interface_b = 0.7;
  double rho = 1.0;
  /// Element counts on (0,a), (a,b), (b,L).
  std::array<int, 3> elements_per_region{6, 8, 6};
  Layout layout = Layout::Transmission;
  std::uint64_t seed = 42;

  friend bool operator==(const DomainConfig&, const DomainConfig&) = default;
};

/// Returns the config unchanged if 0 < a < b < L, rho >= 0 and all element
/// counts are positive. Throws GeometryError or ParameterError otherwise.
DomainConfig validate(const DomainConfig& config);

/// Same geometry with every element count multiplied by `factor`.
DomainConfig refined(const DomainConfig& config, int factor);

struct Mesh1D {
  std::vector<double> nodes;
  std::vector<Region> element_region;
  std::size_t node_a = 0;  ///< index of the node at x = a
  std::size_t node_b = 0;  ///< index of the node at x = b

  [[nodiscard]] std::size_t element_count() const noexcept { return element_region.size(); }
  [[nodiscard]] double element_length(std::size_t e) const { return nodes[e + 1] - nodes[e]; }
  [[nodiscard]] double length() const { return nodes.back(); }
};

/// Uniform subdivision within each of the three regions.
Mesh1D build_mesh(const DomainConfig& config);

// ---- configuration files -------------------------------------------------
//
//   # comment
//   length = 1.0
//   interface_a = 0.3
//   ...
//
// Keys: length, interface_a, interface_b, rho, n_left, n_mid, n_right,
// layout (transmission | all_damped | all_undamped), seed. Missing keys keep
// their defaults; unknown or repeated keys are a ConfigError.

DomainConfig parse_config(std::istream& in);
DomainConfig read_config(const std::filesystem::path& path);
std::string format_config(const DomainConfig& config);

std::string to_string(Layout layout);
std::string to_string(Region region);

}  // namespace platelab
