#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string output;
};

Run cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "hwkb_cli_test.log";
  const std::string cmd = std::string(HWKB_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, os.str()};
}

std::string config(const std::string& name) { return (fs::path(HWKB_CONFIG_DIR) / name).string(); }

nlohmann::json reference(const std::string& name) {
  std::ifstream in(config(name));
  return nlohmann::json::parse(in);
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

nlohmann::json small_1d(const fs::path& out) {
  auto j = reference("reference_1d.json");
  j["points"] = 2048;
  j["epsilons"] = {0.2, 0.1};
  j["output"] = out.string();
  return j;
}

}  // namespace

TEST_CASE("simulate") {
  const fs::path out = fs::temp_directory_path() / "hwkb_cli_sim";
  fs::remove_all(out);
  auto j = small_1d(out);
  j["epsilons"] = {0.1};
  Run r = cli("simulate --config " + write_config("hwkb_sim.json", j).string());
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(fs::exists(out / "trajectory.csv"));

  j["gamma"] = 1.0;
  r = cli("simulate --config " + write_config("hwkb_sim_bad.json", j).string());
  CHECK(r.code == 2);
  CHECK(r.output.find("gamma") != std::string::npos);

  auto wild = small_1d(out);
  wild["epsilons"] = {0.1};
  wild["lambda"] = 400.0;
  wild["points"] = 8192;
  wild["modes"] = nlohmann::json::array({wild["modes"][0]});
  wild["modes"][0]["kappa"] = {0.0};
  r = cli("simulate --config " + write_config("hwkb_sim_wild.json", wild).string());
  CHECK(r.code == 3);
  CHECK(r.output.find("divergence") != std::string::npos);

  r = cli("simulate --config /nonexistent/config.json");
  CHECK(r.code == 2);
  CHECK(r.output.find("/nonexistent/config.json") != std::string::npos);

  r = cli("simulate");
  CHECK(r.code == 2);
  fs::remove_all(out);
}

TEST_CASE("sweep") {
  const fs::path out = fs::temp_directory_path() / "hwkb_cli_sweep";
  fs::remove_all(out);
  auto j = small_1d(out);
  Run r = cli("sweep --config " + write_config("hwkb_sweep.json", j).string());
  CHECK_MESSAGE(r.code == 0, r.output);
  REQUIRE(fs::exists(out / "summary.json"));
  std::ifstream in(out / "summary.json");
  const auto summary = nlohmann::json::parse(in);
  CHECK(summary["beta_fitted"].is_number());
  CHECK(summary["config_echo"]["points"] == 2048);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "loglog.svg"));

  auto dup = j;
  dup["modes"][1]["kappa"] = dup["modes"][0]["kappa"];
  r = cli("sweep --config " + write_config("hwkb_sweep_dup.json", dup).string());
  CHECK(r.code == 2);
  CHECK(r.output.find("delta") != std::string::npos);

  const fs::path blocker = fs::temp_directory_path() / "hwkb_cli_blocker";
  std::ofstream(blocker) << "x";
  auto unwritable = j;
  unwritable["output"] = (blocker / "out").string();
  r = cli("sweep --config " + write_config("hwkb_sweep_io.json", unwritable).string());
  CHECK(r.code == 3);
  CHECK(r.output.find(blocker.string()) != std::string::npos);
  fs::remove(blocker);
  fs::remove_all(out);
}

TEST_CASE("validate") {
  const auto j = small_1d(fs::temp_directory_path() / "hwkb_cli_validate");
  const std::string path = write_config("hwkb_validate.json", j).string();
  Run r = cli("validate --config " + path);
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(r.output.find("PASS kernel_constant") != std::string::npos);

  r = cli("validate --config " + path + " --inject-fault kernel-constant");
  CHECK(r.code == 1);
  CHECK(r.output.find("FAIL kernel_constant") != std::string::npos);
}

TEST_CASE("validate three-dimensional order") {
  const Run r = cli("validate --config " + config("order_3d.json"));
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("derivative order n = 3") != std::string::npos);
}
