#include "common.hpp"

#include "salem/commands.hpp"
#include "salem/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace salem;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("salem_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig small_config(const fs::path& out) {
  RunConfig c;
  c.M = {8};
  c.output = out.string();
  c.measure.samples = 10;
  c.measure.array_radius = 3;
  return c;
}

}  // namespace

TEST_CASE("config round trip and strict keys") {
  RunConfig c;
  c.tau = 3;
  c.restriction.p = {4, 6};
  const RunConfig back = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(back.tau == 3);
  CHECK(back.restriction.p == std::vector<double>{4, 6});
  CHECK(back.hash() == c.hash());
  c.tau = 2.5;
  CHECK(back.hash() != c.hash());
  auto j = nlohmann::json::parse(RunConfig{}.to_json().dump());
  j["bogus"] = 1;
  CHECK_THROWS_AS(RunConfig::from_json(j), ConfigError);
  auto j2 = nlohmann::json::parse(RunConfig{}.to_json().dump());
  j2["tolerances"]["slop"] = 0.1;
  CHECK_THROWS_AS(RunConfig::from_json(j2), ConfigError);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("exit codes") {
  std::ostringstream log;
  RunConfig bad = small_config(scratch("bad"));
  bad.tau = 0.5;
  CHECK(run_command("measure", bad, log) == kExitConfig);
  RunConfig unknown = small_config(scratch("unknown"));
  CHECK(run_command("frobnicate", unknown, log) == kExitConfig);
  RunConfig capped = small_config(scratch("capped"));
  capped.caps.points = 10;
  CHECK(run_command("verify", capped, log) == kExitBudget);
  RunConfig ok = small_config(scratch("ok"));
  ok.k = 0;
  CHECK(run_command("measure", ok, log) == kExitPass);
}

TEST_CASE("artifacts carry hashes and are deterministic") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  RunConfig ca = small_config(a), cb = small_config(b);
  CHECK(run_command("measure", ca, log) == kExitPass);
  CHECK(run_command("measure", cb, log) == kExitPass);
  const fs::path csv = fs::path("measure") / "mu_hat_k1.csv";
  REQUIRE(fs::exists(a / csv));
  const std::string text = slurp(a / csv);
  CHECK(text.rfind("# config_hash=", 0) == 0);
  CHECK(text.find("# bump_hash=") != std::string::npos);
  // Output directory differs, so only the body after the hash lines must match.
  auto body = [](const std::string& s) { return s.substr(s.find('\n', s.find("# bump_hash=")) + 1); };
  CHECK(body(text) == body(slurp(b / csv)));
  auto j = nlohmann::json::parse(slurp(a / "measure" / "measure_k1.json"));
  CHECK(j["config_hash"].get<std::string>() == ca.hash());
  CHECK(j.contains("bump_hash"));

  ca.k = 0;
  CHECK(run_command("measure", ca, log) == kExitPass);
  CHECK(run_command("report", ca, log) == kExitPass);
  auto s = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(s["all_pass"].get<bool>());
  CHECK(s["reports"].size() >= 3);
  CHECK(fs::exists(a / "summary.csv"));
}

TEST_CASE("command-line binary") {
  const fs::path out = scratch("bin");
  const std::string base = std::string(SALEM_CLI_PATH) + " --M 3 -o " + out.string();
  CHECK(WEXITSTATUS(std::system((base + " --k 0 measure > /dev/null").c_str())) == kExitPass);
  CHECK(WEXITSTATUS(std::system((base + " --tau 0.5 measure > /dev/null").c_str())) == kExitConfig);
  const fs::path cfg = out / "bad.json";
  fs::create_directories(out);
  std::ofstream(cfg) << "{\"tau\": 2, \"nonsense\": true}";
  CHECK(WEXITSTATUS(std::system((base + " -c " + cfg.string() + " measure > /dev/null 2>&1").c_str())) ==
        kExitConfig);
}
