#include "semigeo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "semigeo/expr.hpp"

namespace semigeo {

namespace {

constexpr std::pair<Mode, std::string_view> kModes[] = {
    {Mode::Forward, "forward"},
    {Mode::ReconstructMetric, "reconstruct-metric"},
    {Mode::ReconstructConnection, "reconstruct-connection"},
    {Mode::RoundtripMetric, "roundtrip-metric"},
    {Mode::RoundtripConnection, "roundtrip-connection"},
    {Mode::CheckChart, "check-chart"},
};

struct Family {
  std::string_view name;
  int rank;
  int lowest;        // smallest allowed index value
  bool symmetric;    // symmetric in the last two indices
  bool last_not_one; // last index must be >= 2
};

constexpr Family kFamilies[] = {
    {"gtilde", 2, 2, true, false},     {"Gtilde", 2, 2, true, false},
    {"a", 2, 2, true, false},          {"gexact", 2, 2, true, false},
    {"g", 2, 1, true, false},          {"Gamma", 3, 1, true, false},
    {"Gammatilde", 3, 1, true, false}, {"Gammaexact", 3, 1, true, false},
    {"A", 3, 1, false, true},
};

const Family* find_family(std::string_view name) {
  for (const auto& f : kFamilies) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double to_real(std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'", line);
  }
  return v;
}

int to_int(std::string_view text, int line) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("expected an integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = text.find(',');
    parts.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return parts;
}

Interval to_interval(std::string_view text, int line) {
  const auto parts = split_commas(text);
  if (parts.size() != 2) throw ConfigError("interval needs two numbers 'lo, hi'", line);
  return {to_real(parts[0], line), to_real(parts[1], line)};
}

struct RawField {
  std::string family;
  IndexTuple idx;
  std::string text;
  int line;
};

std::string key_text(const std::string& family, const IndexTuple& idx) {
  std::string s = family;
  for (int i : idx) s += "." + std::to_string(i);
  return s;
}

// Families each mode reads, and whether e is required.
struct ModeNeeds {
  std::vector<std::string_view> families;
  bool needs_e;
};

ModeNeeds needs_for(Mode mode, bool metric_source) {
  switch (mode) {
    case Mode::Forward:
    case Mode::CheckChart:
      return {{"g", "Gamma"}, mode == Mode::CheckChart && metric_source};
    case Mode::ReconstructMetric: return {{"gtilde", "Gtilde", "a"}, true};
    case Mode::RoundtripMetric: return {{"gtilde", "Gtilde", "a", "gexact"}, true};
    case Mode::ReconstructConnection: return {{"Gammatilde", "A"}, false};
    case Mode::RoundtripConnection: return {{"Gammatilde", "A", "Gammaexact"}, false};
  }
  return {{}, false};
}

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModes) {
    if (name == text) return m;
  }
  return std::nullopt;
}

const FieldSet& RunConfig::family(const std::string& name) const {
  static const FieldSet empty;
  const auto it = fields.find(name);
  return it == fields.end() ? empty : it->second;
}

bool RunConfig::has(const std::string& name) const {
  const auto it = fields.find(name);
  return it != fields.end() && !it->second.empty();
}

RunConfig load_config(std::istream& in, std::optional<Mode> cli_mode) {
  RunConfig cfg;
  std::optional<Mode> file_mode;
  int mode_line = 0;
  std::set<std::string> seen_keys;
  std::set<std::string> chart_keys;
  std::vector<RawField> raw;
  std::map<int, Interval> box_axes;
  std::optional<Interval> box_all;
  int box_line = 0;
  std::string section;

  std::string buffer;
  int line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    const std::string_view text = trim(strip_comment(buffer));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line);
      section = std::string(trim(text.substr(1, text.size() - 2)));
      if (section != "run" && section != "chart" && section != "tolerances" &&
          section != "fields") {
        throw ConfigError("unknown section [" + section + "]", line);
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key(trim(text.substr(0, eq)));
    const std::string_view value = trim(text.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside of any section", line);
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
    if (!seen_keys.insert(section + "/" + key).second) {
      throw ConfigError("duplicate key '" + key + "'", line);
    }

    if (section == "run") {
      if (key != "mode") throw ConfigError("unknown key '" + key + "' in [run]", line);
      file_mode = parse_mode(value);
      if (!file_mode) throw ConfigError("unknown mode '" + std::string(value) + "'", line);
      mode_line = line;
    } else if (section == "chart") {
      chart_keys.insert(key);
      if (key == "n") {
        cfg.chart.n = to_int(value, line);
      } else if (key == "e") {
        cfg.chart.e = to_int(value, line);
        if (cfg.chart.e != 1 && cfg.chart.e != -1) throw ConfigError("e must be 1 or -1", line);
        cfg.e_given = true;
      } else if (key == "x1_min") {
        cfg.chart.x1_min = to_real(value, line);
      } else if (key == "x1_max") {
        cfg.chart.x1_max = to_real(value, line);
      } else if (key == "h1") {
        cfg.chart.h1 = to_real(value, line);
      } else if (key == "res") {
        cfg.chart.transverse_res.clear();
        for (auto part : split_commas(value)) cfg.chart.transverse_res.push_back(to_int(part, line));
      } else if (key == "box") {
        box_all = to_interval(value, line);
        box_line = line;
      } else if (key.rfind("box.", 0) == 0) {
        box_axes[to_int(std::string_view(key).substr(4), line)] = to_interval(value, line);
        box_line = line;
      } else {
        throw ConfigError("unknown key '" + key + "' in [chart]", line);
      }
    } else if (section == "tolerances") {
      const double v = to_real(value, line);
      if (!(v > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive", line);
      if (key == "blowup") {
        cfg.tolerances.blowup = v;
      } else if (key == "degeneracy") {
        cfg.tolerances.degeneracy = v;
      } else if (key == "roundtrip") {
        cfg.tolerances.roundtrip = v;
      } else {
        throw ConfigError("unknown key '" + key + "' in [tolerances]", line);
      }
    } else {
      RawField f;
      f.line = line;
      std::string_view rest = key;
      auto dot = rest.find('.');
      f.family = std::string(rest.substr(0, dot));
      if (!find_family(f.family)) throw ConfigError("unknown field '" + f.family + "'", line);
      while (dot != std::string_view::npos) {
        rest.remove_prefix(dot + 1);
        dot = rest.find('.');
        f.idx.push_back(to_int(rest.substr(0, dot), line));
      }
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        f.text = std::string(value.substr(1, value.size() - 2));
      } else {
        to_real(value, line);  // bare values must be plain numbers
        f.text = std::string(value);
      }
      raw.push_back(std::move(f));
    }
  }

  if (file_mode && cli_mode && *file_mode != *cli_mode) {
    throw ConfigError("mode '" + std::string(to_string(*file_mode)) +
                          "' conflicts with command-line mode '" +
                          std::string(to_string(*cli_mode)) + "'",
                      mode_line);
  }
  if (!file_mode && !cli_mode) throw ConfigError("no mode given", 0);
  cfg.mode = cli_mode ? *cli_mode : *file_mode;

  const int n = cfg.chart.n;
  if (n < 2) throw ConfigError("n must be at least 2", 0);
  if (box_all || !box_axes.empty()) {
    cfg.chart.transverse_box.assign(static_cast<std::size_t>(n - 1), box_all.value_or(Interval{}));
    for (const auto& [axis, iv] : box_axes) {
      if (axis < 2 || axis > n) throw ConfigError("box axis out of range 2..n", box_line);
      cfg.chart.transverse_box[static_cast<std::size_t>(axis - 2)] = iv;
    }
  }
  try {
    cfg.chart.validate();
  } catch (const InvalidSpec& err) {
    throw ConfigError(std::string("invalid chart: ") + err.what(), 0);
  }
  const char* chart_defaults[][2] = {{"x1_min", "0"}, {"x1_max", "1"}, {"h1", "0.01"},
                                     {"res", "5"},    {"box", "0, 1"}};
  for (const auto& [k, v] : chart_defaults) {
    const bool given = chart_keys.count(k) != 0 ||
                       (std::string_view(k) == "box" && (box_all || !box_axes.empty()));
    if (!given) cfg.notes.push_back(std::string("chart.") + k + " not given, using " + v);
  }

  const bool metric_source = std::any_of(raw.begin(), raw.end(),
                                         [](const RawField& f) { return f.family == "g"; });
  const ModeNeeds needs = needs_for(cfg.mode, metric_source);
  if (needs.needs_e && !cfg.e_given) {
    throw ConfigError("'e' is required in mode " + std::string(to_string(cfg.mode)), 0);
  }
  if (!cfg.e_given && cfg.mode == Mode::Forward && metric_source) {
    cfg.notes.push_back("chart.e not given, using 1");
  }

  // Parse and place every field, rejecting conflicting mirrors.
  std::map<std::string, int> first_line;
  for (const RawField& f : raw) {
    const Family& fam = *find_family(f.family);
    const std::string key = key_text(f.family, f.idx);
    if (std::find(needs.families.begin(), needs.families.end(), fam.name) ==
        needs.families.end()) {
      throw ConfigError("field '" + f.family + "' is not used in mode " +
                            std::string(to_string(cfg.mode)),
                        f.line);
    }
    if (static_cast<int>(f.idx.size()) != fam.rank) {
      throw ConfigError("'" + key + "' needs " + std::to_string(fam.rank) + " indices", f.line);
    }
    for (int i : f.idx) {
      if (i < fam.lowest || i > n) {
        throw ConfigError("index out of range in '" + key + "'", f.line);
      }
    }
    if (fam.last_not_one && f.idx.back() == 1) {
      throw ConfigError("last index of '" + key + "' must be at least 2", f.line);
    }
    ScalarField field = 0.0;
    try {
      field = ScalarField(parse_field(f.text, n));
    } catch (const Error& err) {
      throw ConfigError("bad expression for '" + key + "': " + err.what(), f.line);
    }
    FieldSet& set = cfg.fields[f.family];
    if (const ScalarField* existing = set.find(f.idx)) {
      // Only a mirror can already be present here.
      if (!existing->expression() || !field.expression() ||
          !(*existing->expression() == *field.expression())) {
        throw ConfigError("'" + key + "' conflicts with its symmetric mirror on line " +
                              std::to_string(first_line[key]),
                          f.line);
      }
      continue;
    }
    first_line[key] = f.line;
    set.set(f.idx, field);
    if (fam.symmetric) {
      IndexTuple mirror = f.idx;
      std::swap(mirror[mirror.size() - 2], mirror[mirror.size() - 1]);
      if (mirror != f.idx) {
        first_line[key_text(f.family, mirror)] = f.line;
        set.set(mirror, field);
      }
    }
  }

  const bool has_g = cfg.has("g");
  const bool has_gamma = cfg.has("Gamma");
  if (cfg.mode == Mode::Forward || cfg.mode == Mode::CheckChart) {
    if (has_g == has_gamma) {
      throw ConfigError("give exactly one of the g or Gamma field families", 0);
    }
  }

  // Log every component that falls back to zero.
  for (std::string_view name : needs.families) {
    const Family& fam = *find_family(name);
    const std::string fname(name);
    if (name == "gexact" || name == "Gammaexact") continue;
    if ((name == "g" && !has_g) || (name == "Gamma" && !has_gamma)) continue;
    std::vector<IndexTuple> tuples{{}};
    for (int r = 0; r < fam.rank; ++r) {
      std::vector<IndexTuple> next;
      for (const auto& t : tuples) {
        for (int i = fam.lowest; i <= n; ++i) {
          IndexTuple u = t;
          u.push_back(i);
          next.push_back(std::move(u));
        }
      }
      tuples = std::move(next);
    }
    for (const auto& t : tuples) {
      if (fam.symmetric && t[t.size() - 2] > t[t.size() - 1]) continue;
      if (fam.last_not_one && t.back() == 1) continue;
      if (!cfg.family(fname).contains(t)) cfg.notes.push_back(key_text(fname, t) + " not given, using 0");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Mode> cli_mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string(), 0);
  return load_config(in, cli_mode);
}

}  // namespace semigeo
