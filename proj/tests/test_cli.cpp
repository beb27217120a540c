// End-to-end runs of the vlp binary: outputs, reproducibility, exit codes.

#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vlp/config.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(VLP_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.output.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("vlp_cli_" + std::to_string(::getpid()));
  Scratch() {
    fs::remove_all(dir);
    fs::create_directories(dir);
    spit(dir / "short.toml", "[flights.short]\nbase = \"hover\"\nduration = 1\n"
                             "[flights.wide]\nkind = \"circle\"\nradius = 1.5\nduration = 5\n");
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("simulate, localize and compare") {
  const Scratch s;
  const std::string cfg = " --config " + (s / "short.toml");

  const Run a = run_cli("simulate" + cfg + " --flight short --seed 7 --out " + (s / "a"));
  REQUIRE_MESSAGE(a.code == 0, a.output);
  const Run b = run_cli("simulate" + cfg + " --flight short --seed 7 --out " + (s / "b"));
  REQUIRE(b.code == 0);
  const std::string log = slurp(s / "a/short.csv");
  CHECK(lines(log) == 52);
  CHECK(log == slurp(s / "b/short.csv"));
  CHECK(slurp(s / "a/manifest.json") == slurp(s / "b/manifest.json"));

  const auto m = nlohmann::json::parse(slurp(s / "a/manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["flight"] == "short");
  CHECK(m["config"]["text"] == slurp(s / "short.toml"));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(vlp::fnv1a64(slurp(s / "short.toml"))));
  CHECK(m["config"]["fnv1a64"] == hex);

  SUBCASE("a manifest alone reproduces the run") {
    fs::copy_file(s / "a/manifest.json", s / "m.json");
    fs::remove(s / "short.toml");
    const Run r = run_cli("simulate --from-manifest " + (s / "m.json") + " --out " + (s / "c"));
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(slurp(s / "c/short.csv") == log);
  }

  SUBCASE("a different seed changes the noise") {
    REQUIRE(run_cli("simulate" + cfg + " --flight short --seed 8 --out " + (s / "d")).code == 0);
    CHECK(slurp(s / "d/short.csv") != log);
  }

  SUBCASE("localize") {
    const Run r = run_cli("localize --method firefly --log " + (s / "a/short.csv") + " --out " + (s / "ff.csv") +
                      " --heights " + (s / "h.csv"));
    REQUIRE_MESSAGE(r.code == 0, r.output);
    const std::string trace = slurp(s / "ff.csv");
    CHECK(trace.rfind("t,method,x,y,z,err,evals\n", 0) == 0);
    CHECK(lines(trace) == 52);
    CHECK(lines(slurp(s / "h.csv")) == 52);
    CHECK(fs::exists(s / "ff.csv.manifest.json"));

    const Run again = run_cli("localize --method pso-3d --seed 3 --log " + (s / "a/short.csv") + " --out " + (s / "p1.csv"));
    REQUIRE(again.code == 0);
    REQUIRE(run_cli("localize --method pso-3d --seed 3 --log " + (s / "a/short.csv") + " --out " + (s / "p2.csv")).code == 0);
    CHECK(slurp(s / "p1.csv") == slurp(s / "p2.csv"));
  }

  SUBCASE("compare") {
    const Run r = run_cli("compare --logs '" + (s / "a/*.csv") + "' --methods firefly,indirect-h --out " + (s / "cmp"));
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(r.output.find("Mean error (cm)") != std::string::npos);
    CHECK(lines(slurp(s / "cmp/comparison.csv")) == 3);
    CHECK(lines(slurp(s / "cmp/traces.csv")) == 1 + 2 * 51);
    CHECK(slurp(s / "cmp/comparison.txt") == r.output);
    CHECK(fs::exists(s / "cmp/manifest.json"));
  }
}

TEST_CASE("exit codes") {
  const Scratch s;
  const std::string cfg = " --config " + (s / "short.toml");

  CHECK(run_cli("").code == 2);
  CHECK(run_cli("simulate --flight circle").code == 2);                          // missing --out
  CHECK(run_cli("simulate --flight nowhere --out " + (s / "x")).code == 2);      // unknown plan
  CHECK(run_cli("simulate" + cfg + " --flight wide --out " + (s / "x")).code == 2);  // leaves the box
  CHECK(run_cli("simulate --config " + (s / "missing.toml") + " --out " + (s / "x")).code == 2);
  spit(s / "bad.toml", "[fusion]\nepsilon = 3\n");
  CHECK(run_cli("simulate --config " + (s / "bad.toml") + " --out " + (s / "x")).code == 2);

  REQUIRE(run_cli("simulate" + cfg + " --flight short --seed 1 --out " + (s / "a")).code == 0);
  const std::string log = s / "a/short.csv";
  CHECK(run_cli("localize --method bogus --log " + log).code == 2);
  CHECK(run_cli("localize --method firefly --epsilon 2 --log " + log).code == 2);
  CHECK(run_cli("localize --method firefly --stride-k 0 --log " + log).code == 2);
  CHECK(run_cli("compare --logs '" + (s / "none/*.csv") + "'").code == 2);

  // third data row loses a column
  std::istringstream in(slurp(log));
  std::string text, line;
  for (int k = 0; std::getline(in, line); ++k) text += (k == 3 ? line.substr(0, line.rfind(',')) : line) + "\n";
  spit(s / "broken.csv", text);
  const Run broken = run_cli("localize --method firefly --log " + (s / "broken.csv"));
  CHECK(broken.code == 3);
  CHECK(broken.output.find("line 4") != std::string::npos);
  CHECK(run_cli("compare --logs " + (s / "broken.csv")).code == 3);

  // no light at all: every frame fails
  std::istringstream in2(slurp(log));
  std::string dark;
  std::getline(in2, line);
  dark = line + "\n";
  while (std::getline(in2, line)) {
    std::size_t pos = line.find(',');
    for (int c = 0; c < 4; ++c) {
      const std::size_t end = line.find(',', pos + 1);
      line.replace(pos + 1, end - pos - 1, "0");
      pos = line.find(',', pos + 1);
    }
    dark += line + "\n";
  }
  spit(s / "dark.csv", dark);
  CHECK(run_cli("localize --method indirect-h --log " + (s / "dark.csv")).code == 4);
}
