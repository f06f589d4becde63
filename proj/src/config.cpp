#include "dunkl/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dunkl {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, std::string>)
      s += v[i];
    else if constexpr (std::is_floating_point_v<T>)
      s += fmt(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& what) {
  throw std::invalid_argument("config: " + key + " = '" + value + "': " + what);
}

double to_double(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v))
    bad(key, s, "not a finite number");
  return v;
}

long long to_int(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) bad(key, s, "not an integer");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& s) {
  const long long v = to_int(key, s);
  if (v < 0) bad(key, s, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
  std::vector<double> v;
  for (const auto& x : split(s)) v.push_back(to_double(key, x));
  return v;
}

std::vector<int> to_ints(const std::string& key, const std::string& s) {
  std::vector<int> v;
  for (const auto& x : split(s)) v.push_back(static_cast<int>(to_int(key, x)));
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
  std::string key;  // section.name
  Setter set;
  Getter get;
};

// Single table of keys drives parsing, printing and the unknown-key check.
const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"experiment.name", [](auto& c, auto&, auto& v) { c.experiment = trim(v); },
       [](auto& c) { return c.experiment; }},
      {"experiment.seed",
       [](auto& c, auto& k, auto& v) {
         const std::string t = trim(v);
         std::uint64_t s = 0;
         auto r = std::from_chars(t.data(), t.data() + t.size(), s);
         if (r.ec != std::errc() || r.ptr != t.data() + t.size()) bad(k, v, "not an unsigned 64-bit integer");
         c.seed = s;
       },
       [](auto& c) { return c.seed ? std::to_string(*c.seed) : std::string(); }},
      {"root_system.family", [](auto& c, auto&, auto& v) { c.root.family = parse_root_family(trim(v)); },
       [](auto& c) { return to_string(c.root.family); }},
      {"root_system.dimension", [](auto& c, auto& k, auto& v) { c.root.dimension = static_cast<int>(to_int(k, v)); },
       [](auto& c) { return std::to_string(c.root.dimension); }},
      {"root_system.dihedral_order",
       [](auto& c, auto& k, auto& v) { c.root.dihedral_order = static_cast<int>(to_int(k, v)); },
       [](auto& c) { return std::to_string(c.root.dihedral_order); }},
      {"root_system.multiplicities", [](auto& c, auto& k, auto& v) { c.root.multiplicities = to_doubles(k, v); },
       [](auto& c) { return join(c.root.multiplicities); }},
      {"grid.half_width", [](auto& c, auto& k, auto& v) { c.grid.half_width = to_double(k, v); },
       [](auto& c) { return fmt(c.grid.half_width); }},
      {"grid.resolution", [](auto& c, auto& k, auto& v) { c.grid.resolution = static_cast<int>(to_int(k, v)); },
       [](auto& c) { return std::to_string(c.grid.resolution); }},
      {"grid.grading", [](auto& c, auto& k, auto& v) { c.grid.grading = to_double(k, v); },
       [](auto& c) { return fmt(c.grid.grading); }},
      {"kernel.h_rel", [](auto& c, auto& k, auto& v) { c.derivative.h_rel = to_double(k, v); },
       [](auto& c) { return fmt(c.derivative.h_rel); }},
      {"kernel.richardson_levels",
       [](auto& c, auto& k, auto& v) { c.derivative.richardson_levels = static_cast<int>(to_int(k, v)); },
       [](auto& c) { return std::to_string(c.derivative.richardson_levels); }},
      {"operators.names", [](auto& c, auto&, auto& v) { c.ops.names = split(v); },
       [](auto& c) { return join(c.ops.names); }},
      {"operators.orders", [](auto& c, auto& k, auto& v) { c.ops.orders = to_ints(k, v); },
       [](auto& c) { return join(c.ops.orders); }},
      {"operators.sigma", [](auto& c, auto& k, auto& v) { c.ops.sigma = to_double(k, v); },
       [](auto& c) { return fmt(c.ops.sigma); }},
      {"operators.t_min", [](auto& c, auto& k, auto& v) { c.ops.t_min = to_double(k, v); },
       [](auto& c) { return fmt(c.ops.t_min); }},
      {"operators.t_max", [](auto& c, auto& k, auto& v) { c.ops.t_max = to_double(k, v); },
       [](auto& c) { return fmt(c.ops.t_max); }},
      {"operators.t_count", [](auto& c, auto& k, auto& v) { c.ops.t_count = to_count(k, v); },
       [](auto& c) { return std::to_string(c.ops.t_count); }},
      {"operators.bracket_stride", [](auto& c, auto& k, auto& v) { c.ops.bracket_stride = to_count(k, v); },
       [](auto& c) { return std::to_string(c.ops.bracket_stride); }},
      {"weak_11.scales", [](auto& c, auto& k, auto& v) { c.weak.scales = to_doubles(k, v); },
       [](auto& c) { return join(c.weak.scales); }},
      {"weak_11.positions", [](auto& c, auto& k, auto& v) { c.weak.positions = to_doubles(k, v); },
       [](auto& c) { return join(c.weak.positions); }},
      {"weak_11.position_scale", [](auto& c, auto& k, auto& v) { c.weak.position_scale = to_double(k, v); },
       [](auto& c) { return fmt(c.weak.position_scale); }},
      {"weak_11.lambda_decades", [](auto& c, auto& k, auto& v) { c.weak.lambda_decades = to_double(k, v); },
       [](auto& c) { return fmt(c.weak.lambda_decades); }},
      {"weak_11.lambda_count", [](auto& c, auto& k, auto& v) { c.weak.lambda_count = to_count(k, v); },
       [](auto& c) { return std::to_string(c.weak.lambda_count); }},
      {"weak_11.slope_limit", [](auto& c, auto& k, auto& v) { c.weak.slope_limit = to_double(k, v); },
       [](auto& c) { return fmt(c.weak.slope_limit); }},
      {"weak_11.spread_limit", [](auto& c, auto& k, auto& v) { c.weak.spread_limit = to_double(k, v); },
       [](auto& c) { return fmt(c.weak.spread_limit); }},
      {"h1_atoms.r_min", [](auto& c, auto& k, auto& v) { c.atoms.r_min = to_double(k, v); },
       [](auto& c) { return fmt(c.atoms.r_min); }},
      {"h1_atoms.r_max", [](auto& c, auto& k, auto& v) { c.atoms.r_max = to_double(k, v); },
       [](auto& c) { return fmt(c.atoms.r_max); }},
      {"h1_atoms.radii", [](auto& c, auto& k, auto& v) { c.atoms.radii = to_count(k, v); },
       [](auto& c) { return std::to_string(c.atoms.radii); }},
      {"h1_atoms.offsets", [](auto& c, auto& k, auto& v) { c.atoms.offsets = to_doubles(k, v); },
       [](auto& c) { return join(c.atoms.offsets); }},
      {"h1_atoms.min_success", [](auto& c, auto& k, auto& v) { c.atoms.min_success = to_count(k, v); },
       [](auto& c) { return std::to_string(c.atoms.min_success); }},
      {"h1_atoms.slope_limit", [](auto& c, auto& k, auto& v) { c.atoms.slope_limit = to_double(k, v); },
       [](auto& c) { return fmt(c.atoms.slope_limit); }},
      {"bmo_blo.battery", [](auto& c, auto&, auto& v) { c.bmo.battery = split(v); },
       [](auto& c) { return join(c.bmo.battery); }},
      {"bmo_blo.centers_per_axis", [](auto& c, auto& k, auto& v) { c.bmo.centers_per_axis = to_count(k, v); },
       [](auto& c) { return std::to_string(c.bmo.centers_per_axis); }},
      {"bmo_blo.extent", [](auto& c, auto& k, auto& v) { c.bmo.extent = to_double(k, v); },
       [](auto& c) { return fmt(c.bmo.extent); }},
      {"bmo_blo.r_min", [](auto& c, auto& k, auto& v) { c.bmo.r_min = to_double(k, v); },
       [](auto& c) { return fmt(c.bmo.r_min); }},
      {"bmo_blo.scales", [](auto& c, auto& k, auto& v) { c.bmo.scales = to_count(k, v); },
       [](auto& c) { return std::to_string(c.bmo.scales); }},
      {"bmo_blo.spread_limit", [](auto& c, auto& k, auto& v) { c.bmo.spread_limit = to_double(k, v); },
       [](auto& c) { return fmt(c.bmo.spread_limit); }},
      {"bmo_blo.doubling_tolerance", [](auto& c, auto& k, auto& v) { c.bmo.doubling_tolerance = to_double(k, v); },
       [](auto& c) { return fmt(c.bmo.doubling_tolerance); }},
      {"bmo_blo.info_orders", [](auto& c, auto& k, auto& v) { c.bmo.info_orders = to_ints(k, v); },
       [](auto& c) { return join(c.bmo.info_orders); }},
      {"kernel_bounds.orders", [](auto& c, auto& k, auto& v) { c.bounds.orders = to_ints(k, v); },
       [](auto& c) { return join(c.bounds.orders); }},
      {"kernel_bounds.times", [](auto& c, auto& k, auto& v) { c.bounds.times = to_doubles(k, v); },
       [](auto& c) { return join(c.bounds.times); }},
      {"kernel_bounds.span", [](auto& c, auto& k, auto& v) { c.bounds.span = to_double(k, v); },
       [](auto& c) { return fmt(c.bounds.span); }},
      {"kernel_bounds.points_per_axis",
       [](auto& c, auto& k, auto& v) { c.bounds.points_per_axis = static_cast<int>(to_int(k, v)); },
       [](auto& c) { return std::to_string(c.bounds.points_per_axis); }},
      {"kernel_bounds.c", [](auto& c, auto& k, auto& v) { c.bounds.c = to_double(k, v); },
       [](auto& c) { return fmt(c.bounds.c); }},
  };
  return f;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

}  // namespace

ExperimentConfig default_config(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  c.root.family = RootFamily::z2_product;
  c.root.dimension = 1;
  c.root.multiplicities = {1.0};
  if (experiment == "exp_h1_atoms") {
    // Atoms need sqrt(t_min) well below r_min / 10 and a box that holds the
    // large-t tails of the widest atoms.
    c.grid.half_width = 12.0;
    c.grid.resolution = 1152;
    c.ops.t_min = 2.5e-4;
  } else if (experiment == "exp_bmo_blo") {
    c.ops.orders = {0};
    c.bmo.info_orders = {1};
    c.ops.t_min = 1e-3;
    c.ops.t_max = 1.0;
    c.ops.t_count = 48;
  }
  return c;
}

void validate_config(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(),
          "experiment.name: unknown experiment '" + c.experiment + "'");
  require(c.root.dimension >= 1 && c.root.dimension <= 3, "root_system.dimension must lie in [1, 3]");
  for (double k : c.root.multiplicities) require(k >= 0.0, "root_system.multiplicities must be nonnegative");
  require(c.grid.half_width > 0.0, "grid.half_width must be positive");
  require(c.grid.resolution >= kMinResolution && c.grid.resolution % 2 == 0,
          "grid.resolution must be even and at least 8");
  require(c.grid.grading >= 1.0 && c.grid.grading <= 3.0, "grid.grading must lie in [1, 3]");
  require(c.derivative.h_rel > 0.0 && c.derivative.h_rel < 0.1, "kernel.h_rel must lie in (0, 0.1)");
  require(c.derivative.richardson_levels >= 0 && c.derivative.richardson_levels <= 4,
          "kernel.richardson_levels must lie in [0, 4]");
  require(!c.ops.names.empty(), "operators.names is empty");
  for (const auto& n : c.ops.names)
    require(n == "maximal" || n == "gfunc" || n == "variation" || n == "oscillation",
            "operators.names: unknown operator '" + n + "'");
  require(!c.ops.orders.empty(), "operators.orders is empty");
  for (int m : c.ops.orders)
    require(m >= 0 && m <= kMaxTimeDerivative, "operators.orders must lie in [0, 4]");
  require(c.ops.sigma > 2.0, "operators.sigma must exceed 2 for theorem-level experiments");
  require(c.ops.t_min > 0.0 && c.ops.t_max > c.ops.t_min, "operators: need 0 < t_min < t_max");
  require(c.ops.t_count >= 2, "operators.t_count must be at least 2");
  require(c.ops.bracket_stride >= 1, "operators.bracket_stride must be positive");
  require(!c.weak.scales.empty(), "weak_11.scales is empty");
  for (double s : c.weak.scales) require(s > 0.0, "weak_11.scales must be positive");
  require(c.weak.position_scale > 0.0, "weak_11.position_scale must be positive");
  require(c.weak.lambda_decades > 0.0 && c.weak.lambda_count >= 3,
          "weak_11: need lambda_decades > 0 and lambda_count >= 3");
  require(c.atoms.r_min > 0.0 && c.atoms.r_max > c.atoms.r_min && c.atoms.radii >= 2,
          "h1_atoms: need 0 < r_min < r_max and radii >= 2");
  require(!c.atoms.offsets.empty(), "h1_atoms.offsets is empty");
  for (double u : c.atoms.offsets) require(u >= 0.0, "h1_atoms.offsets must be nonnegative");
  for (const auto& b : c.bmo.battery)
    require(b == "log" || b == "log1p" || b == "cos" || b == "martingale" || b == "indicator" || b == "log2" ||
                b == "constant",
            "bmo_blo.battery: unknown test function '" + b + "'");
  require(!c.bmo.battery.empty(), "bmo_blo.battery is empty");
  for (int m : c.bmo.info_orders)
    require(m >= 0 && m <= kMaxTimeDerivative, "bmo_blo.info_orders must lie in [0, 4]");
  require(c.bmo.centers_per_axis >= 1 && c.bmo.r_min > 0.0 && c.bmo.scales >= 3,
          "bmo_blo: need centers_per_axis >= 1, r_min > 0 and at least 3 scales");
  require(!c.bounds.orders.empty() && !c.bounds.times.empty(), "kernel_bounds: orders and times must be nonempty");
  for (int m : c.bounds.orders)
    require(m >= 0 && m <= kMaxTimeDerivative, "kernel_bounds.orders must lie in [0, 4]");
  for (double t : c.bounds.times) require(t > 0.0, "kernel_bounds.times must be positive");
  require(c.bounds.span > 0.0 && c.bounds.points_per_axis >= 2 && c.bounds.c >= 0.0,
          "kernel_bounds: need span > 0, points_per_axis >= 2, c >= 0");
  // Building the root system checks the multiplicity list against the family.
  build_root_system(c.root).validate();
}

ExperimentConfig parse_config(std::istream& is) {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : pt) {
    if (body.empty())
      throw std::invalid_argument("config: key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!find_field(full)) throw std::invalid_argument("config: unknown key '" + full + "'");
      kv[full] = value.data();
    }
  }
  auto it = kv.find("experiment.name");
  if (it == kv.end()) throw std::invalid_argument("config: experiment.name is required");
  ExperimentConfig c = default_config(trim(it->second));
  for (const auto& f : fields()) {
    auto v = kv.find(f.key);
    if (v != kv.end()) f.set(c, f.key, v->second);
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    const std::string value = f.get(cfg);
    if (f.key == "experiment.seed" && value.empty()) continue;
    if (sec != section) {
      if (!section.empty()) os << '\n';
      os << '[' << sec << "]\n";
      section = sec;
    }
    os << f.key.substr(dot + 1) << " = " << value << '\n';
  }
}

}  // namespace dunkl
