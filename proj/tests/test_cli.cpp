#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {
const std::string kCli = SHNLS_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("shnls_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}
}  // namespace

TEST_CASE("exit codes: help, usage errors, domain errors") {
  CHECK(run("--help") == 0);
  CHECK(run("townes --help") == 0);
  CHECK(run("") == 1);                          // missing subcommand
  CHECK(run("no-such-subcommand") == 1);        // unknown subcommand
  const auto d = fresh_dir("err");
  CHECK(run("--out-dir " + d.string() + " simulate --order bogus") == 2);
  CHECK(run("--out-dir " + d.string() + " simulate --figure nope") == 2);
  CHECK(run("--out-dir " + d.string() +
            " classify --order o1 --L0 -3 --beta0 0.01") == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  for (const auto& d : {a, b}) {
    REQUIRE(run("--out-dir " + d.string() + " townes") == 0);
    REQUIRE(run("--out-dir " + d.string() + " constants") == 0);
    REQUIRE(run("--out-dir " + d.string() + " simulate --figure fig1c") == 0);
    REQUIRE(run("--out-dir " + d.string() +
                " f1-table --eps-min 0.001 --eps-max 0.1 --eps-count 16") == 0);
  }
  for (const char* f : {"townes_profile.csv", "townes_profile.json",
                        "constants.json", "trajectory_fig1c.csv",
                        "outcome_fig1c.json", "f1_table.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("constants snapshot short-circuits the shooting solve") {
  const auto d = fresh_dir("snap");
  REQUIRE(run("--out-dir " + d.string() + " constants") == 0);
  REQUIRE(fs::exists(d / "constants_snapshot.json"));
  const auto first = slurp(d / "constants.json");
  // second run resolves through the snapshot; results must be identical
  REQUIRE(run("--out-dir " + d.string() + " constants") == 0);
  CHECK(slurp(d / "constants.json") == first);
  // forced recompute also reproduces the same constants
  REQUIRE(run("--out-dir " + d.string() + " --recompute-constants constants") ==
          0);
  CHECK(slurp(d / "constants.json") == first);
}

TEST_CASE("config file supplies defaults, explicit flags win") {
  const auto d = fresh_dir("cfg");
  const fs::path cfg = d / "run.json";
  {
    std::ofstream out(cfg);
    out << R"({"order":"o2","beta0":0.01,"L0":0.85,"dLt0":0.0})" << "\n";
  }
  REQUIRE(run("--out-dir " + d.string() + " classify --config " +
              cfg.string()) == 0);
  const auto from_cfg = slurp(d / "classify.json");
  const auto e = fresh_dir("cfg_explicit");
  REQUIRE(run("--out-dir " + e.string() +
              " classify --order o2 --beta0 0.01 --L0 0.85 --dLt0 0") == 0);
  CHECK(from_cfg == slurp(e / "classify.json"));
  // an explicit flag overrides the config value
  REQUIRE(run("--out-dir " + d.string() + " classify --config " + cfg.string() +
              " --L0 10 --dLt0 1") == 0);
  CHECK(slurp(d / "classify.json") != from_cfg);
  CHECK(run("--out-dir " + d.string() + " classify --config " +
            (d / "missing.json").string()) == 1);
}

TEST_CASE("simulate honors named figure recipes") {
  const auto d = fresh_dir("figs");
  struct Want {
    const char* name;
    const char* kind;
  };
  for (const auto& w : {Want{"fig2", "Collapse"}, Want{"fig3a", "Defocus"},
                        Want{"fig4b", "ArrestThenDefocus"}}) {
    REQUIRE(run("--out-dir " + d.string() + " simulate --figure " + w.name) ==
            0);
    const auto out =
        slurp(d / (std::string("outcome_") + w.name + ".json"));
    INFO(w.name);
    CHECK(out.find(std::string("\"") + w.kind + "\"") != std::string::npos);
  }
  const auto traj = slurp(d / "trajectory_fig2.csv");
  CHECK(traj.rfind("t,L,dL,beta,tau,first_integral_residual", 0) == 0);
}

TEST_CASE("threshold and sweep emit well-formed results") {
  const auto d = fresh_dir("ts");
  REQUIRE(run("--out-dir " + d.string() +
              " threshold --order o2 --beta0 0.01 --L0 0.1 --bracket-lo -200 "
              "--bracket-hi 0 --t-max 20") == 0);
  const auto th = slurp(d / "threshold.json");
  CHECK(th.find("dL_threshold") != std::string::npos);
  REQUIRE(run("--out-dir " + d.string() +
              " sweep --order o1 --alpha-list 0.01 --beta0-list 0.01,0.02 "
              "--L0-list 1 --dLt0-list -1,1 --t-max 50 --jobs 2") == 0);
  const auto sw = slurp(d / "sweep.jsonl");
  std::size_t lines = 0;
  for (char c : sw) lines += (c == '\n');
  CHECK(lines == 4);
  // deterministic ordering irrespective of thread count
  const auto d1 = fresh_dir("ts_serial");
  REQUIRE(run("--out-dir " + d1.string() +
              " sweep --order o1 --alpha-list 0.01 --beta0-list 0.01,0.02 "
              "--L0-list 1 --dLt0-list -1,1 --t-max 50 --jobs 1") == 0);
  CHECK(slurp(d1 / "sweep.jsonl") == sw);
}
