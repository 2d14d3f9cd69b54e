#include "disperse/app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "disperse/grid.hpp"
#include "disperse/propagators.hpp"
#include "disperse/virial.hpp"

namespace disperse::app {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const YAML::Mark m = node.Mark();
    std::ostringstream out;
    out << source_ << ":" << (m.is_null() ? 0 : m.line + 1) << ":" << (m.is_null() ? 0 : m.column + 1)
        << ": " << message;
    throw Error(ErrorKind::config, out.str());
  }

  // Runs `f`, turning any library Error into a config error at `node`.
  template <class F>
  void check(const YAML::Node& node, const std::string& what, F&& f) const {
    try {
      f();
    } catch (const Error& e) {
      fail(node, what + ": " + e.what());
    }
  }

  void only_keys(const YAML::Node& node, std::initializer_list<const char*> keys) const {
    if (!node.IsMap()) fail(node, "expected a mapping");
    for (const auto& kv : node) {
      const auto name = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return name == k; }))
        fail(kv.first, "unknown key '" + name + "'");
    }
  }

  double number(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a number");
    try {
      return parse_length(node.Scalar());
    } catch (const Error&) {
      fail(node, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  std::size_t count(const YAML::Node& node) const {
    const double v = number(node);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) fail(node, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::string text(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "expected a string");
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node) const {
    if (!node.IsSequence()) fail(node, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item));
    return out;
  }

  PotentialKind potential_kind(const YAML::Node& node) const {
    const auto kind = parse_potential_kind(text(node));
    if (!kind) fail(node, "unknown potential kind '" + node.Scalar() + "' (zero|sech2|gaussian|well)");
    return *kind;
  }

  template <class T>
  void set(const YAML::Node& map, const char* key, T& out) const {
    const YAML::Node n = map[key];
    if (!n) return;
    if constexpr (std::is_same_v<T, double>) {
      out = number(n);
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      out = count(n);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      out = count(n);
    } else if constexpr (std::is_same_v<T, std::string>) {
      out = text(n);
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      out = numbers(n);
    }
  }

 private:
  std::string source_;
};

ExperimentConfig parse_node(const YAML::Node& root, const std::string& source) {
  const Reader rd(source);
  ExperimentConfig cfg;
  cfg.source = source;
  if (!root || root.IsNull()) rd.fail(root, "empty configuration");
  rd.only_keys(root, {"grid", "potential", "initial_data", "stepper", "alpha", "seed", "output_dir",
                      "decay", "scatter", "virial", "profiles", "tails", "sweep"});

  const YAML::Node g = root["grid"];
  if (!g) rd.fail(root, "missing required block 'grid'");
  rd.only_keys(g, {"num_points", "half_width"});
  rd.set(g, "num_points", cfg.grid.num_points);
  rd.set(g, "half_width", cfg.grid.half_width);
  std::optional<Grid> grid;
  rd.check(g, "grid", [&] { grid.emplace(cfg.grid.num_points, cfg.grid.half_width); });

  if (const YAML::Node p = root["potential"]) {
    if (p.IsScalar()) {
      if (rd.potential_kind(p) != PotentialKind::zero) rd.fail(p, "give the potential as a mapping");
    } else {
      rd.only_keys(p, {"kind", "V0", "a"});
      PotentialBlock b;
      if (!p["kind"]) rd.fail(p, "potential needs 'kind'");
      b.kind = rd.potential_kind(p["kind"]);
      rd.set(p, "V0", b.v0);
      rd.set(p, "a", b.a);
      if (b.kind != PotentialKind::zero) {
        rd.check(p, "potential", [&] { sample_potential(PotentialSpec(b.kind, b.v0, b.a), *grid); });
        cfg.potential = b;
      }
    }
  }

  if (const YAML::Node d = root["initial_data"]) {
    rd.only_keys(d, {"kind", "amplitude", "width", "center", "velocity"});
    if (d["kind"]) {
      const auto kind = parse_profile_kind(rd.text(d["kind"]));
      if (!kind) rd.fail(d["kind"], "unknown initial-data kind (gaussian|sech|plane-modulated)");
      cfg.initial_data.kind = *kind;
    }
    rd.set(d, "amplitude", cfg.initial_data.amplitude);
    rd.set(d, "width", cfg.initial_data.width);
    rd.set(d, "center", cfg.initial_data.center);
    rd.set(d, "velocity", cfg.initial_data.velocity);
    rd.check(d, "initial_data", [&] { cfg.initial_data.validate(); });
  }

  if (const YAML::Node a = root["alpha"]) cfg.alpha = rd.number(a);

  if (const YAML::Node s = root["stepper"]) {
    rd.only_keys(s, {"dt", "T", "record_every"});
    rd.set(s, "dt", cfg.stepper.dt);
    rd.set(s, "T", cfg.stepper.t_final);
    rd.set(s, "record_every", cfg.stepper.record_every);
    if (!(cfg.stepper.t_final >= 0.0) || !std::isfinite(cfg.stepper.t_final))
      rd.fail(s, "stepper.T must be finite and non-negative");
  }
  {
    StepperConfig sc;
    sc.dt = cfg.stepper.dt;
    sc.alpha = cfg.alpha;
    sc.record_every = cfg.stepper.record_every;
    const YAML::Node at = root["alpha"] ? root["alpha"] : (root["stepper"] ? root["stepper"] : root);
    rd.check(at, "stepper", [&] { sc.validate(); });
  }

  if (const YAML::Node s = root["seed"]) cfg.seed = rd.count(s);
  rd.set(root, "output_dir", cfg.output_dir);

  if (const YAML::Node d = root["decay"]) {
    rd.only_keys(d, {"norms", "t0", "t1"});
    rd.set(d, "norms", cfg.decay.norms);
    rd.set(d, "t0", cfg.decay.t0);
    rd.set(d, "t1", cfg.decay.t1);
    for (double a : cfg.decay.norms)
      if (!(a >= 2.0)) rd.fail(d, "decay norms must be >= 2 (or inf)");
    if (!(cfg.decay.t0 > 0.0) || !(cfg.decay.t1 > cfg.decay.t0)) rd.fail(d, "decay window needs 0 < t0 < t1");
  }
  if (const YAML::Node s = root["scatter"]) {
    rd.only_keys(s, {"pullbacks", "windows", "threshold"});
    rd.set(s, "pullbacks", cfg.scatter.pullbacks);
    rd.set(s, "windows", cfg.scatter.windows);
    rd.set(s, "threshold", cfg.scatter.threshold);
    if (cfg.scatter.pullbacks < 3) rd.fail(s, "scatter.pullbacks must be >= 3");
    if (cfg.scatter.windows < 2) rd.fail(s, "scatter.windows must be >= 2");
    if (!(cfg.scatter.threshold > 0.0)) rd.fail(s, "scatter.threshold must be positive");
  }
  if (const YAML::Node v = root["virial"]) {
    rd.only_keys(v, {"R", "random_fields"});
    rd.set(v, "R", cfg.virial.radius);
    rd.set(v, "random_fields", cfg.virial.random_fields);
    rd.check(v, "virial", [&] { (void)build_cutoff(cfg.virial.radius, *grid); });
  }
  if (const YAML::Node p = root["profiles"]) {
    rd.only_keys(p, {"offsets", "T", "p", "r"});
    rd.set(p, "offsets", cfg.profiles.offsets);
    rd.set(p, "T", cfg.profiles.t_final);
    rd.set(p, "p", cfg.profiles.p);
    rd.set(p, "r", cfg.profiles.r);
    for (double y : cfg.profiles.offsets)
      if (!(std::abs(y) < 2.0 * cfg.grid.half_width)) rd.fail(p, "offsets must satisfy |y| < 2L");
    if (!(cfg.profiles.t_final > 0.0)) rd.fail(p, "profiles.T must be positive");
    if (!(cfg.profiles.p >= 1.0) || !(cfg.profiles.r >= 1.0)) rd.fail(p, "profiles norms must be >= 1");
  }
  if (const YAML::Node t = root["tails"]) {
    rd.only_keys(t, {"radii"});
    rd.set(t, "radii", cfg.tails.radii);
  }
  if (const YAML::Node s = root["sweep"]) {
    rd.only_keys(s, {"alpha", "kind", "V0", "amplitude"});
    // Absent axes hold the base value; an explicitly empty list empties the grid.
    SweepBlock b;
    b.alpha = {cfg.alpha};
    b.kind = {cfg.potential ? cfg.potential->kind : PotentialKind::zero};
    b.v0 = {cfg.potential ? cfg.potential->v0 : 0.0};
    b.amplitude = {cfg.initial_data.amplitude};
    rd.set(s, "alpha", b.alpha);
    rd.set(s, "V0", b.v0);
    rd.set(s, "amplitude", b.amplitude);
    if (const YAML::Node k = s["kind"]) {
      if (!k.IsSequence()) rd.fail(k, "expected a list of potential kinds");
      b.kind.clear();
      for (const auto& item : k) b.kind.push_back(rd.potential_kind(item));
    }
    for (double a : b.alpha)
      if (!(a > 4.0)) rd.fail(s["alpha"], "sweep alpha values must be > 4");
    cfg.sweep = b;
  }
  return cfg;
}

}  // namespace

double parse_length(const std::string& raw) {
  std::string s = raw;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == ".inf" || lower == "infinity" || lower == "+inf") return kInf;
  double factor = 1.0;
  if (lower.size() >= 2 && lower.ends_with("pi")) {
    factor = std::numbers::pi;
    lower.resize(lower.size() - 2);
    if (lower.ends_with("*")) lower.pop_back();
    if (lower.empty()) return factor;
  }
  double v = 0.0;
  const char* first = lower.data();
  const char* last = first + lower.size();
  if (!lower.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw Error(ErrorKind::invalid_input, "not a number: '" + raw + "'");
  return v * factor;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream out;
    out << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
    throw Error(ErrorKind::config, out.str());
  }
  return parse_node(root, source);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, path + ": cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  using nlohmann::ordered_json;
  auto num = [](double v) -> ordered_json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  auto nums = [&](const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  ordered_json j;
  j["grid"] = {{"num_points", cfg.grid.num_points}, {"half_width", cfg.grid.half_width}};
  if (cfg.potential)
    j["potential"] = {{"kind", to_string(cfg.potential->kind)}, {"V0", cfg.potential->v0}, {"a", cfg.potential->a}};
  else
    j["potential"] = "none";
  const Profile& d = cfg.initial_data;
  j["initial_data"] = {{"kind", to_string(d.kind)}, {"amplitude", d.amplitude}, {"width", d.width},
                       {"center", d.center}, {"velocity", d.velocity}};
  j["stepper"] = {{"dt", cfg.stepper.dt}, {"T", cfg.stepper.t_final}, {"record_every", cfg.stepper.record_every}};
  j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  j["decay"] = {{"norms", nums(cfg.decay.norms)}, {"t0", cfg.decay.t0}, {"t1", cfg.decay.t1}};
  j["scatter"] = {{"pullbacks", cfg.scatter.pullbacks}, {"windows", cfg.scatter.windows},
                  {"threshold", cfg.scatter.threshold}};
  j["virial"] = {{"R", cfg.virial.radius}, {"random_fields", cfg.virial.random_fields}};
  j["profiles"] = {{"offsets", nums(cfg.profiles.offsets)}, {"T", cfg.profiles.t_final},
                   {"p", num(cfg.profiles.p)}, {"r", num(cfg.profiles.r)}};
  j["tails"] = {{"radii", nums(cfg.tails.radii)}};
  if (cfg.sweep) {
    ordered_json kinds = ordered_json::array();
    for (auto k : cfg.sweep->kind) kinds.push_back(to_string(k));
    j["sweep"] = {{"alpha", nums(cfg.sweep->alpha)}, {"kind", kinds}, {"V0", nums(cfg.sweep->v0)},
                  {"amplitude", nums(cfg.sweep->amplitude)}};
  }
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace disperse::app
