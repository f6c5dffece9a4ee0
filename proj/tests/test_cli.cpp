// End-to-end checks of the command-line surface. The binary path comes from
// the build system.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "shadowlab/system_io.hpp"

using namespace shadowlab;

namespace {

const std::filesystem::path kTmp = [] {
  auto p = std::filesystem::temp_directory_path() / "shadowlab_cli_tests";
  std::filesystem::create_directories(p);
  return p;
}();

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CliResult cli(const std::string& args) {
  const auto out = kTmp / "stdout.txt";
  const auto err = kTmp / "stderr.txt";
  const std::string cmd =
      std::string(CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int ret = std::system(cmd.c_str());
  REQUIRE(ret != -1);
  return CliResult{WEXITSTATUS(ret), slurp(out), slurp(err)};
}

std::string temp_file(const std::string& name) { return (kTmp / name).string(); }

}  // namespace

TEST_CASE("validate accepts generated files and reports defects", "[cli]") {
  const auto path = temp_file("odometer2.json");
  CHECK(cli("generate --kind odometer --levels 2 --out " + path).code == 0);
  const CliResult ok = cli("validate " + path);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"valid\": true") != std::string::npos);

  // repeated map index
  {
    auto j = nlohmann::json::parse(slurp(path));
    j["map"] = {0, 0, 1, 2};
    std::ofstream(temp_file("dup.json")) << j.dump(2);
  }
  const CliResult dup = cli("validate " + temp_file("dup.json"));
  CHECK(dup.code == 2);
  CHECK(dup.out.find("NotAPermutation") != std::string::npos);

  // triangle violation names the triple
  {
    nlohmann::ordered_json j;
    j["name"] = "bad";
    j["points"] = {"a", "b", "c"};
    j["metric"] = {{"kind", "matrix"},
                   {"scale_denominator", 1},
                   {"entries", {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}}};
    j["map"] = {0, 1, 2};
    std::ofstream(temp_file("triangle.json")) << j.dump(2);
  }
  const CliResult tri = cli("validate " + temp_file("triangle.json"));
  CHECK(tri.code == 2);
  CHECK(tri.out.find("TriangleViolation") != std::string::npos);
  CHECK(tri.out.find("\"i\": 0") != std::string::npos);
  CHECK(tri.out.find("\"j\": 1") != std::string::npos);
  CHECK(tri.out.find("\"k\": 2") != std::string::npos);

  CHECK(cli("validate " + temp_file("missing.json")).code == 3);

  std::ofstream(temp_file("garbage.json")) << "{]";
  CHECK(cli("validate " + temp_file("garbage.json")).code == 2);
}

TEST_CASE("generate is deterministic and validates its own parameters", "[cli]") {
  const auto a = temp_file("rand_a.json");
  const auto b = temp_file("rand_b.json");
  CHECK(cli("generate --kind random --n 6 --seed 1 --out " + a).code == 0);
  CHECK(cli("generate --kind random --n 6 --seed 1 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  CHECK(cli("generate --kind circle --n 1 --k 0 --out " + temp_file("bad.json")).code == 2);
  CHECK(cli("generate --kind nosuch --out " + temp_file("bad.json")).code == 2);

  const auto cantor = temp_file("cantor25.json");
  CHECK(cli("generate --kind cantor --level 2 --grid 5 --out " + cantor).code == 0);
  CHECK(read_system_file(cantor).points.size() == 9);
}

TEST_CASE("shadow prints the shadowable set", "[cli]") {
  const auto circle = temp_file("circle24.json");
  CHECK(cli("generate --kind circle --n 24 --k 0 --out " + circle).code == 0);
  const CliResult none = cli("shadow " + circle + " --eps 1/4 --delta 1/24");
  CHECK(none.code == 0);
  CHECK(none.out.find("shadowable (0 of 24):") != std::string::npos);

  const auto od = temp_file("odometer2b.json");
  CHECK(cli("generate --kind odometer --levels 2 --out " + od).code == 0);
  const CliResult all = cli("shadow " + od + " --eps 1/2 --delta 1/2");
  CHECK(all.out.find("shadowable (4 of 4):") != std::string::npos);

  // delta 0: every orbit shadows itself
  const CliResult zero = cli("shadow " + circle + " --eps 0/1 --delta 0/1");
  CHECK(zero.out.find("shadowable (24 of 24):") != std::string::npos);

  // witness windows print for excluded points
  const CliResult wit = cli("shadow " + circle + " --eps 1/24 --delta 1/24 --witness");
  CHECK(wit.code == 0);
  CHECK(wit.out.find("witness 0 [center=") != std::string::npos);

  CHECK(cli("shadow " + circle + " --eps nonsense --delta 1/2").code == 2);
}

TEST_CASE("sweep with a single cell matches shadow", "[cli]") {
  const auto od = temp_file("odometer2c.json");
  CHECK(cli("generate --kind odometer --levels 2 --out " + od).code == 0);
  const auto csv = temp_file("cell.csv");
  CHECK(cli("sweep " + od + " --eps-grid 1/2 --delta-grid 1/2 --out " + csv).code == 0);
  const std::string body = slurp(csv);
  CHECK(body == "eps,delta,n_shadowable,potp,n_chain_classes,n_deg_points,status\n"
                "1/2,1/2,4,true,1,0,ok\n");

  const auto json_path = temp_file("cell.json");
  CHECK(cli("sweep " + od + " --out " + csv + " --json " + json_path + " --include-sets").code == 0);
  const auto j = nlohmann::json::parse(slurp(json_path));
  CHECK(j["system"] == "odometer2");
  CHECK(j["rows"].size() == 9);  // 3 eps x 3 delta candidates
  CHECK(j["rows"][0].contains("shadowable"));
}

TEST_CASE("classify reports the dynamical flags", "[cli]") {
  const auto rot = temp_file("circle8.json");
  CHECK(cli("generate --kind circle --n 8 --k 3 --out " + rot).code == 0);
  const CliResult r = cli("classify " + rot);
  CHECK(r.code == 0);
  CHECK(r.out.find("minimal: true") != std::string::npos);
  CHECK(r.out.find("isometry: true") != std::string::npos);
  CHECK(r.out.find("distality margin: 1/8") != std::string::npos);
  CHECK(r.out.find("alpha=") != std::string::npos);
}

TEST_CASE("certify exit codes distinguish certified, none, unknown", "[cli]") {
  const auto od = temp_file("odometer2d.json");
  CHECK(cli("generate --kind odometer --levels 2 --out " + od).code == 0);
  const CliResult good = cli("certify " + od + " --point 00 --eps 1/2");
  CHECK(good.code == 0);
  CHECK(good.out.find("delta: 1/2") != std::string::npos);
  CHECK(good.out.find("trace verified: true") != std::string::npos);
  CHECK(good.out.find("engine confirms: true") != std::string::npos);

  const auto circle = temp_file("circle4.json");
  CHECK(cli("generate --kind circle --n 4 --k 0 --out " + circle).code == 0);
  const CliResult none = cli("certify " + circle + " --point 0 --eps 1/4");
  CHECK(none.code == 1);
  CHECK(none.out.find("none") != std::string::npos);

  CHECK(cli("certify " + od + " --point nosuch --eps 1/2").code == 2);
}
