#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "geopath/io.hpp"

using namespace geopath;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "geopath");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const std::string& name) { return std::string(GEOPATH_SCENARIO_DIR) + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("geopath_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void same_tree(const fs::path& a, const fs::path& b) {
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    CAPTURE(rel.string());
    CHECK(slurp(e.path()) == slurp(b / rel));
    ++files;
  }
  CHECK(files > 0);
}

Json error_json(const Result& r) { return Json::parse(r.err)["error"]; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and version") {
    const Result h = run({"--help"});
    CHECK(h.code == 0);
    for (const char* sub : {"simulate", "plan", "sweep", "ion-check"}) CHECK(h.out.find(sub) != std::string::npos);
    CHECK(run({"plan", "--help"}).out.find("--theta-mid") != std::string::npos);
    const Result v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(tool_version()) != std::string::npos);
  }

  TEST_CASE("simulate the orange slice") {
    const Result r = run({"simulate", "--curve", scenario("orange_slice.json"), "--target", "z:pi/8"});
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    CHECK(doc["report"]["fidelity"].get<double>() >= 1 - 1e-8);
    CHECK(doc["version"] == tool_version());
    CHECK(doc["config"]["target"] == "z:pi/8");
    CHECK(doc["config"].contains("curve"));
  }

  TEST_CASE("plan reports the three-segment time") {
    const Result r = run({"plan", "--axis", "z", "--gamma", "pi/8", "--theta-mid", "pi/3", "--cap", "1.0"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
      if (line.rfind("three_segment,", 0) != 0) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 7);
      CHECK(std::stod(cells[5]) / kPi == doctest::Approx(0.4415).epsilon(1e-3));
      found = true;
    }
    CHECK(found);
  }

  TEST_CASE("planned curves reload in simulate") {
    const fs::path dir = fresh_dir("roundtrip");
    REQUIRE(run({"plan", "--axis", "1,1,1", "--gamma", "pi/4", "--theta-mid", "pi/2", "-o", dir.string()}).code == 0);
    int n = 0;
    for (const auto& e : fs::directory_iterator(dir / "curves")) {
      const Result r = run({"simulate", "--curve", e.path().string(), "--target", "1,1,1:pi/4"});
      REQUIRE(r.code == 0);
      CHECK(Json::parse(r.out)["report"]["fidelity"].get<double>() >= 1 - 1e-6);
      ++n;
    }
    CHECK(n == 3);
  }

  TEST_CASE("outputs are byte-identical across runs") {
    const std::vector<std::vector<std::string>> jobs{
        {"--scenario", scenario("simulate_orange_slice.json")},
        {"--scenario", scenario("plan_pi8.json")},
        {"sweep", "--gamma", "pi/8", "--warps", "4", "--steps", "1024"},
        {"ion-check", "--ratios", "10,20"},
        {"simulate", "--curve", scenario("three_segment.json"), "--kind", "two",
         "--trajectory-stride", "64", "--schedule-samples", "9"}};
    int k = 0;
    for (const auto& job : jobs) {
      const fs::path a = fresh_dir("det_a" + std::to_string(k)), b = fresh_dir("det_b" + std::to_string(k));
      ++k;
      auto ja = job, jb = job;
      ja.insert(ja.end(), {"-o", a.string()});
      jb.insert(jb.end(), {"-o", b.string()});
      REQUIRE(run(ja).code == 0);
      REQUIRE(run(jb).code == 0);
      same_tree(a, b);
    }
  }

  TEST_CASE("scenario files") {
    for (const char* name : {"simulate_orange_slice.json", "plan_pi8.json", "sweep_pi8.json", "ion_check.json"}) {
      CAPTURE(name);
      const Result r = run({"--scenario", scenario(name)});
      CHECK(r.code == 0);
      CHECK(r.err.empty());
    }
  }

  TEST_CASE("errors map to exit codes with JSON on stderr") {
    const fs::path dir = fresh_dir("errors");
    fs::create_directories(dir);
    std::ofstream(dir / "empty.json").close();
    Result r = run({"--scenario", (dir / "empty.json").string()});
    CHECK(r.code == 2);
    CHECK(error_json(r)["kind"] == "config_error");
    CHECK(error_json(r)["exit_code"] == 2);

    r = run({"simulate", "--curve", (dir / "missing.json").string()});
    CHECK(r.code == 3);

    std::ofstream(dir / "open.json")
        << R"({"segments": [{"kind": "meridian", "phi": 0, "theta_from": 0, "theta_to": 1, "fraction": 1}]})";
    r = run({"simulate", "--curve", (dir / "open.json").string()});
    CHECK(r.code == 12);
    CHECK(error_json(r)["kind"] == "open_curve");

    std::ofstream(dir / "typo.json") << R"({"mode": "plan", "gama": "pi/8"})";
    CHECK(run({"--scenario", (dir / "typo.json").string()}).code == 2);
    std::ofstream(dir / "mode.json") << R"({"mode": "dance"})";
    CHECK(run({"--scenario", (dir / "mode.json").string()}).code == 2);

    CHECK(run({"plan", "--gamma", "pi/x"}).code == 2);
    CHECK(run({"plan", "--method", "euler"}).code == 2);
    CHECK(run({"plan", "--steps", "4"}).code == 10);
    CHECK(run({"--scenario", scenario("plan_pi8.json"), "plan"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"sweep", "--amplitude", "0.5"}).code == 10);
    CHECK(run({"ion-check", "--eta", "0.4"}).code == 10);
    CHECK(run({"ion-check", "--ratios", "3", "--n-max", "2", "--qubits", "00", "--drive", "constant"}).code == 20);
  }

  TEST_CASE("exit codes are distinct") {
    std::set<int> codes;
    for (ErrorKind k : {ErrorKind::Config, ErrorKind::Io, ErrorKind::InvalidArgument,
                        ErrorKind::DimensionMismatch, ErrorKind::OpenCurve, ErrorKind::Domain,
                        ErrorKind::SweepTooLarge, ErrorKind::FrameNotOrthonormal,
                        ErrorKind::NonCyclicFrame, ErrorKind::NonCyclic, ErrorKind::UnitarityLost,
                        ErrorKind::ComplexEnvelope, ErrorKind::CutoffTooSmall,
                        ErrorKind::DetuningTooSmall}) {
      const int c = cli::exit_code(k);
      CHECK(c > 1);
      CHECK(codes.insert(c).second);
    }
  }
}
