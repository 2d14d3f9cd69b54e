#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "disperse/app/commands.hpp"
#include "disperse/app/config.hpp"
#include "support.hpp"

using namespace disperse;
using namespace disperse::app;
using namespace disperse::testing;
namespace fs = std::filesystem;

namespace {

// Per-process scratch root, removed when the test binary exits.
struct ScratchRoot {
  fs::path path = fs::temp_directory_path() / ("disperse-app-test-" + std::to_string(::getpid()));
  ~ScratchRoot() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path scratch(const std::string& name) {
  static const ScratchRoot root;
  const fs::path dir = root.path / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Context context(const std::string& yaml, const std::string& name, bool allow_untrusted = false) {
  return Context{parse_config(yaml, name + ".yaml"), scratch(name), allow_untrusted};
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string s; std::getline(in, s);) out.push_back(s);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

std::vector<std::string> split(const std::string& row) {
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  return cells;
}

const std::string kSmallGrid = "grid: {num_points: 512, half_width: 20pi}\n";

}  // namespace

TEST_CASE("lengths") {
  CHECK(parse_length("40pi") == doctest::Approx(40.0 * kPi));
  CHECK(parse_length("pi") == doctest::Approx(kPi));
  CHECK(parse_length("2*pi") == doctest::Approx(2.0 * kPi));
  CHECK(parse_length("2.5") == 2.5);
  CHECK(parse_length("1e-3") == 1e-3);
  CHECK(parse_length("inf") == INFINITY);
  CHECK(parse_length(" 3 pi ") == doctest::Approx(3.0 * kPi));
  CHECK(error_kind([] { parse_length("forty"); }).has_value());
  CHECK(error_kind([] { parse_length("1.5x"); }).has_value());
}

TEST_CASE("configuration errors carry locations") {
  const auto message = [](const std::string& yaml) {
    return error_message([&] { parse_config(yaml, "cfg.yaml"); });
  };
  const auto kind = [](const std::string& yaml) {
    return error_kind([&] { parse_config(yaml, "cfg.yaml"); });
  };

  SUBCASE("unknown top-level key") {
    const std::string yaml = kSmallGrid + "alpha: 6\nbogus: 1\n";
    CHECK(kind(yaml) == ErrorKind::config);
    CHECK(message(yaml).find("cfg.yaml:3:1:") != std::string::npos);
    CHECK(message(yaml).find("bogus") != std::string::npos);
  }
  SUBCASE("non-numeric value") {
    const std::string m = message("grid:\n  num_points: lots\n  half_width: 10\n");
    CHECK(m.find("cfg.yaml:2:15:") != std::string::npos);
  }
  SUBCASE("grid must be a power of two") {
    const std::string m = message("grid: {num_points: 100, half_width: 10}\n");
    CHECK(m.find("cfg.yaml:1:") != std::string::npos);
    CHECK(m.find("power of two") != std::string::npos);
  }
  SUBCASE("stepper values") {
    const std::string m = message(kSmallGrid + "stepper:\n  dt: -1\n");
    CHECK(m.find("cfg.yaml:") != std::string::npos);
    CHECK(kind(kSmallGrid + "stepper: {dt: 1e-3, T: -1}\n") == ErrorKind::config);
  }
  SUBCASE("potential and profile") {
    CHECK(message(kSmallGrid + "potential: {kind: coulomb}\n").find("coulomb") != std::string::npos);
    CHECK(kind(kSmallGrid + "potential: {kind: gaussian, V0: 1, a: 50}\n") == ErrorKind::config);
    CHECK(message(kSmallGrid + "potential: {kind: gaussian, V0: 1, a: 50}\n").find("half_width >=") !=
          std::string::npos);
    CHECK(kind(kSmallGrid + "initial_data: {kind: gaussian, width: 0}\n") == ErrorKind::config);
    CHECK(kind(kSmallGrid + "initial_data: {kind: triangle}\n") == ErrorKind::config);
  }
  SUBCASE("module preconditions") {
    CHECK(kind(kSmallGrid + "alpha: 3\n") == ErrorKind::config);
    CHECK(kind(kSmallGrid + "virial: {R: 40}\n") == ErrorKind::config);
    CHECK(kind(kSmallGrid + "decay: {t0: 5, t1: 2}\n") == ErrorKind::config);
    CHECK(kind(kSmallGrid + "scatter: {pullbacks: 2}\n") == ErrorKind::config);
    CHECK(kind(kSmallGrid + "sweep: {alpha: [4]}\n") == ErrorKind::config);
    CHECK(kind("alpha: 6\n") == ErrorKind::config);
    CHECK(kind("") == ErrorKind::config);
    CHECK(kind("grid: [1, 2\n") == ErrorKind::config);
  }
  SUBCASE("missing file") {
    CHECK(error_kind([] { load_config("/nonexistent/disperse.yaml"); }) == ErrorKind::config);
  }
}

TEST_CASE("configuration values and hash") {
  const ExperimentConfig c = parse_config(
      kSmallGrid + "potential: {kind: sech2, V0: 2, a: 1.5}\nalpha: 6\nseed: 9\noutput_dir: a\n"
                   "profiles: {offsets: [0, 5]}\n");
  CHECK(c.grid.num_points == 512);
  CHECK(c.grid.half_width == doctest::Approx(20.0 * kPi));
  REQUIRE(c.potential.has_value());
  CHECK(c.potential->v0 == 2.0);
  CHECK(c.potential->a == 1.5);
  CHECK(c.alpha == 6.0);
  CHECK(c.seed == 9);
  CHECK(c.profiles.offsets == std::vector<double>{0.0, 5.0});
  CHECK(c.decay.norms.front() == INFINITY);

  const std::string h = config_hash(c);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  ExperimentConfig d = c;
  d.output_dir = "elsewhere";
  CHECK(config_hash(d) == h);
  d.alpha = 7.0;
  CHECK(config_hash(d) != h);
  CHECK_FALSE(to_json(c).contains("output_dir"));

  CHECK_FALSE(parse_config(kSmallGrid + "potential: none\n").potential.has_value());
}

TEST_CASE("exit codes") {
  SUBCASE("check-potential") {
    CHECK(run_command("check-potential", context(kSmallGrid + "potential: {kind: sech2, V0: 1, a: 1}\n", "cp-ok")) ==
          kExitOk);
    CHECK(run_command("check-potential", context(kSmallGrid + "potential: {kind: well, V0: 2, a: 1}\n", "cp-well")) ==
          kExitHypothesis);
  }
  SUBCASE("resonance") {
    CHECK(run_command("resonance", context(kSmallGrid, "res-free")) == kExitResonant);
    const Context ctx = context(kSmallGrid + "potential: {kind: sech2, V0: 1, a: 1}\n", "res-sech");
    CHECK(run_command("resonance", ctx) == kExitOk);
    CHECK(fs::exists(ctx.output_dir / "jost.csv"));
    const Json j = read_json(ctx.output_dir / "resonance.json");
    CHECK(j["command"] == "resonance");
    CHECK(j["config_hash"] == config_hash(ctx.config));
    CHECK(std::abs(j["wronskian"].get<double>()) > 0.1);
    const Json run = read_json(ctx.output_dir / "run.json");
    CHECK(run["exit_code"] == 0);
  }
  SUBCASE("spectrum") {
    const Context ctx = context("grid: {num_points: 2048, half_width: 20}\npotential: {kind: well, V0: 2, a: 1}\n", "spec");
    CHECK(run_command("spectrum", ctx) == kExitOk);
    const Json j = read_json(ctx.output_dir / "spectrum.json");
    CHECK(j["count"] == 1);
    CHECK(j["lowest"].get<double>() == doctest::Approx(-1.0).epsilon(1e-3));
    const Context none = context(kSmallGrid, "spec-none");
    CHECK(run_command("spectrum", none) == kExitOk);
    CHECK(read_json(none.output_dir / "spectrum.json")["lowest"].is_null());
  }
  SUBCASE("errors map to one") {
    CHECK(run_command("no-such-command", context(kSmallGrid, "unknown")) == kExitError);
    CHECK(run_command("profiles", context(kSmallGrid, "profiles-none")) == kExitError);
    CHECK(run_command("sweep", context(kSmallGrid, "sweep-none")) == kExitError);
  }
}

TEST_CASE("evolve") {
  const std::string base = kSmallGrid + "potential: {kind: sech2, V0: 1, a: 1}\nalpha: 6\n";

  SUBCASE("T = 0 records one row") {
    const Context ctx = context(base + "stepper: {dt: 1e-3, T: 0}\n", "evolve-zero");
    CHECK(run_command("evolve", ctx) == kExitOk);
    const auto rows = lines(ctx.output_dir / "trace.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "t,mass,energy,sup_norm,h1");
    CHECK(split(rows[1])[0] == "0");
    CHECK(lines(ctx.output_dir / "final_state.csv").size() == 513);
  }
  SUBCASE("short run conserves mass") {
    const Context ctx = context(base + "stepper: {dt: 1e-3, T: 0.5, record_every: 100}\n", "evolve-short");
    const CommandResult r = cmd_evolve(ctx);
    CHECK(r.summary["snapshots"] == 6);
    CHECK(r.summary["max_relative_mass_drift"].get<double>() <= 1e-12);
    CHECK(r.summary["trusted"] == true);
    CHECK(r.summary["equation"] == "i u_t = -u_xx + V u + |u|^alpha u");
  }
  SUBCASE("past the horizon") {
    const std::string yaml = base + "stepper: {dt: 1e-2, T: 20, record_every: 100}\n";
    const Context strict = context(yaml, "evolve-late");
    const std::string msg = error_message([&] { cmd_evolve(strict); });
    CHECK(msg.find("T_wrap") != std::string::npos);
    CHECK(msg.find("--allow-untrusted") != std::string::npos);
    CHECK(run_command("evolve", strict) == kExitError);

    const Context lax = context(yaml, "evolve-late-ok", true);
    CHECK(run_command("evolve", lax) == kExitOk);
    CHECK(read_json(lax.output_dir / "evolve.json")["trusted"] == false);
  }
}

TEST_CASE("analysis commands") {
  SUBCASE("decay") {
    const Context ctx = context(
        "grid: {num_points: 2048, half_width: 64pi}\nstepper: {dt: 1e-2, record_every: 10}\n"
        "decay: {norms: [inf, 4], t0: 2, t1: 10}\n",
        "decay");
    CHECK(run_command("decay", ctx) == kExitOk);
    const Json j = read_json(ctx.output_dir / "decay.json");
    CHECK(j["fits"].size() == 2);
    CHECK(j["slope"].get<double>() == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(j["expected_slope"] == -0.5);
    CHECK(fs::exists(ctx.output_dir / "decay.csv"));
  }
  SUBCASE("scatter") {
    const Context ctx = context(
        "grid: {num_points: 2048, half_width: 64pi}\npotential: {kind: sech2, V0: 1, a: 1}\n"
        "initial_data: {kind: gaussian, amplitude: 0.05}\nalpha: 6\nstepper: {dt: 1e-2, T: 6, record_every: 10}\n",
        "scatter");
    CHECK(run_command("scatter", ctx) == kExitOk);
    const Json j = read_json(ctx.output_dir / "scatter.json");
    CHECK(j["verdict"] == "scattering-consistent");
    CHECK(j["with_potential"] == true);
    CHECK(lines(ctx.output_dir / "windows.csv").size() == 5);
  }
  SUBCASE("virial on the zero field") {
    const Context ctx = context(kSmallGrid +
                                    "potential: {kind: sech2, V0: 1, a: 1}\nalpha: 6\n"
                                    "initial_data: {kind: gaussian, amplitude: 0}\n"
                                    "stepper: {dt: 1e-2, T: 0.1}\nvirial: {R: 5, random_fields: 3}\n",
                                "virial-zero");
    CHECK(run_command("virial", ctx) == kExitOk);
    const auto rows = lines(ctx.output_dir / "virial.csv");
    REQUIRE(rows.size() == 12);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cells = split(rows[i]);
      for (std::size_t k = 1; k < cells.size(); ++k) CHECK(std::stod(cells[k]) == 0.0);
    }
    const Json j = read_json(ctx.output_dir / "virial.json");
    CHECK(j["vir1_max_residual"] == 0.0);
    CHECK(j["ceiling_holds"] == true);
  }
  SUBCASE("profiles") {
    const Context ctx = context(
        "grid: {num_points: 2048, half_width: 40pi}\npotential: {kind: sech2, V0: 1, a: 1}\n"
        "profiles: {offsets: [0, 10, 20, 30], T: 1}\n",
        "profiles");
    CHECK(run_command("profiles", ctx) == kExitOk);
    const auto rows = lines(ctx.output_dir / "profiles.csv");
    CHECK(rows.size() == 5);
    const Json j = read_json(ctx.output_dir / "profiles.json");
    CHECK(j["flow_difference_non_increasing"] == true);
    CHECK(j["overlap_non_increasing"] == true);
  }
}

TEST_CASE("sweep") {
  const std::string base =
      "grid: {num_points: 1024, half_width: 32pi}\npotential: {kind: sech2, V0: 1, a: 1}\n"
      "initial_data: {kind: gaussian, amplitude: 0.05}\nalpha: 6\nstepper: {dt: 2e-2, T: 4, record_every: 10}\n";

  SUBCASE("empty grid") {
    const Context ctx = context(base + "sweep: {alpha: []}\n", "sweep-empty");
    CHECK(run_command("sweep", ctx) == kExitOk);
    CHECK(lines(ctx.output_dir / "sweep.csv").size() == 1);
    CHECK(read_json(ctx.output_dir / "sweep.json")["points"] == 0);
  }

  SUBCASE("failed points do not stop the sweep") {
    const Context ctx = context(base + "sweep: {kind: [sech2, well], V0: [1]}\n", "sweep-well");
    CHECK(run_command("sweep", ctx) == kExitOk);
    const auto rows = lines(ctx.output_dir / "sweep.csv");
    REQUIRE(rows.size() == 3);
    int failed = 0, ok = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cells = split(rows[i]);
      if (cells[1] == "well") {
        CHECK(cells[4] == "failed");
        ++failed;
      } else {
        CHECK(cells[4] == "ok");
        CHECK(cells[5] == "scattering-consistent");
        ++ok;
      }
    }
    CHECK(failed == 1);
    CHECK(ok == 1);
    CHECK(read_json(ctx.output_dir / "sweep.json")["failures"] == 1);
  }

  SUBCASE("results do not depend on the thread count") {
    const std::string yaml = base + "sweep: {alpha: [5, 6], V0: [0, 1], amplitude: [0.05, 0.03]}\n";
    ::setenv("DISPERSE_LAB_THREADS", "1", 1);
    CHECK(sweep_threads() == 1);
    const Context a = context(yaml, "sweep-1");
    CHECK(run_command("sweep", a) == kExitOk);
    ::setenv("DISPERSE_LAB_THREADS", "3", 1);
    CHECK(sweep_threads() == 3);
    const Context b = context(yaml, "sweep-3");
    CHECK(run_command("sweep", b) == kExitOk);
    ::unsetenv("DISPERSE_LAB_THREADS");

    const auto rows = lines(a.output_dir / "sweep.csv");
    CHECK(rows.size() == 9);
    CHECK(rows == lines(b.output_dir / "sweep.csv"));
    for (int i = 0; i < 8; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%03d", i);
      CHECK(slurp(a.output_dir / name / "trace.csv") == slurp(b.output_dir / name / "trace.csv"));
    }
    // Sorted by (alpha, kind, V0, amplitude).
    CHECK(split(rows[1])[0] == "5");
    CHECK(split(rows[1])[3] == "0.029999999999999999");
  }
}
