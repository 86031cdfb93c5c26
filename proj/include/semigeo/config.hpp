#pragma once

// Run configuration. Line-oriented text:
//
//   [run]
//   mode = roundtrip-metric
//   [chart]
//   n = 2
//   e = 1
//   x1_min = 0
//   x1_max = 1
//   h1 = 0.001
//   res = 5            # or one count per transverse axis: 5, 9
//   box = 0, 1         # every transverse axis; box.3 = -1, 1 for one axis
//   [tolerances]
//   blowup = 1e6
//   degeneracy = 1e-10
//   roundtrip = 1e-6
//   [fields]
//   gtilde.2.2 = "1"
//   a.2.2 = "-cos(x1)^2"
//
// '#' starts a comment. Field values are quoted expressions in x1..xn.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semigeo/error.hpp"
#include "semigeo/field.hpp"
#include "semigeo/grid.hpp"

namespace semigeo {

enum class Mode {
  Forward,
  ReconstructMetric,
  ReconstructConnection,
  RoundtripMetric,
  RoundtripConnection,
  CheckChart,
};

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct Tolerances {
  double blowup = 1e6;
  double degeneracy = 1e-10;
  double roundtrip = 1e-6;
};

struct RunConfig {
  Mode mode = Mode::Forward;
  ChartSpec chart;
  bool e_given = false;
  Tolerances tolerances;
  /// Field families (gtilde, Gtilde, a, g, Gamma, Gammatilde, A, gexact,
  /// Gammaexact). Symmetric mirrors are filled in on load.
  std::map<std::string, FieldSet> fields;
  /// Defaults that were applied, one line each.
  std::vector<std::string> notes;

  const FieldSet& family(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// `cli_mode` overrides a missing [run] mode; a conflicting one is an error.
RunConfig load_config(std::istream& in, std::optional<Mode> cli_mode = std::nullopt);
RunConfig load_config(const std::filesystem::path& path,
                      std::optional<Mode> cli_mode = std::nullopt);

}  // namespace semigeo
