#include <doctest.h>

#include <hypolab/report.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;
using hypolab::report::Json;
using hypolab::report::read_file;
using hypolab::report::write_file;

namespace {

std::string env(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name << " must point at the build products");
  return v;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("hypolab_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(const std::string& args) {
  static int counter = 0;
  const auto base = scratch() / ("call" + std::to_string(counter++));
  const std::string cmd =
      env("HYPOLAB_BIN") + " " + args + " > " + base.string() + ".out 2> " + base.string() + ".err";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(base.string() + ".out");
  r.err = read_file(base.string() + ".err");
  return r;
}

std::string config(const std::string& name) { return env("HYPOLAB_CONFIGS") + "/" + name; }

fs::path write_config(const std::string& name, const Json& j) {
  const auto p = scratch() / name;
  write_file(p, j.dump());
  return p;
}

}  // namespace

TEST_CASE("table1 at alpha = 1.5 reproduces the classical rows") {
  const auto out = scratch() / "table1";
  const auto r = run_cli("run " + config("table1_alpha15.json") + " --out " + out.string());
  CHECK(r.code == 0);
  const auto rep = Json::parse(read_file(out / "report.json"));
  CHECK(rep["schema_version"] == 1);
  CHECK(rep["status"] == "ok");
  const auto& rows = rep["results"]["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["p"] == 0.5);
  CHECK(rows[0]["verdict"] == "holds");
  CHECK(rows[1]["p"] == 1);
  CHECK(rows[1]["verdict"] == "fails");
}

TEST_CASE("radius above r0 is rejected by name") {
  const auto cfg = write_config("too_wide.json", Json{{"kind", "profile-elliptic"}, {"r", 0.9}});
  const auto r = run_cli("run " + cfg.string() + " --out " + (scratch() / "too_wide").string());
  CHECK(r.code == 1);
  CHECK(r.err.find("r: 0.90000000000000002 exceeds r0 = ") != std::string::npos);
  CHECK_FALSE(fs::exists(scratch() / "too_wide" / "report.json"));
}

TEST_CASE("validation errors are listed field by field") {
  const auto cfg = write_config("bad.json", Json{{"kind", "superlog-probe"},
                                                 {"nodes", 100},
                                                 {"p", -1},
                                                 {"colour", "blue"},
                                                 {"coefficient", "exp(-abs(y)^(-1)"}});
  const auto r = run_cli("run " + cfg.string());
  CHECK(r.code == 1);
  CHECK(r.err.find("nodes: must be odd") != std::string::npos);
  CHECK(r.err.find("p: -1 outside (0, 10]") != std::string::npos);
  CHECK(r.err.find("colour: unknown key") != std::string::npos);
  CHECK(r.err.find("coefficient: ") != std::string::npos);

  const auto nested = write_config("nested.json", Json{{"kind", "profile-parabolic"},
                                                       {"operator", {{"a3", "1"}}},
                                                       {"n_x", 401},
                                                       {"n_t", 201}});
  const auto rn = run_cli("run " + nested.string());
  CHECK(rn.code == 1);
  CHECK(rn.err.find("operator.a3: unknown key") != std::string::npos);
  CHECK(rn.err.find("n_t: must be >= n_x") != std::string::npos);

  const auto kind = write_config("kind.json", Json{{"kind", "mystery"}});
  CHECK(run_cli("run " + kind.string()).err.find("kind: unknown kind") != std::string::npos);
  write_file(scratch() / "broken.json", "{\"kind\": ");
  CHECK(run_cli("run " + (scratch() / "broken.json").string()).code == 1);
}

TEST_CASE("lp-suite passes and is byte-identical for a fixed seed") {
  const auto a = scratch() / "lp_a", b = scratch() / "lp_b", c = scratch() / "lp_c";
  CHECK(run_cli("run " + config("lp_suite.json") + " --out " + a.string()).code == 0);
  CHECK(run_cli("run " + config("lp_suite.json") + " --out " + b.string()).code == 0);
  CHECK(run_cli("run " + config("lp_suite.json") + " --out " + c.string() + " --seed 99").code == 0);
  CHECK(read_file(a / "report.json") == read_file(b / "report.json"));
  CHECK(read_file(a / "data.csv") == read_file(b / "data.csv"));
  CHECK(read_file(a / "data.csv") != read_file(c / "data.csv"));
  const auto rep = Json::parse(read_file(a / "report.json"));
  for (const auto& ch : rep["checks"]) CHECK(ch["passed"] == true);
  CHECK(Json::parse(read_file(c / "report.json"))["seed"] == 99);
}

TEST_CASE("CSV format: header, %.17g and LF endings") {
  const auto out = scratch() / "interp";
  REQUIRE(run_cli("run " + config("interp_verify.json") + " --out " + out.string()).code == 0);
  const auto csv = read_file(out / "data.csv");
  CHECK(csv.rfind("xi,R,tail,bound\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  // Every field is its own %.17g rendering, so the text round-trips bit for bit.
  std::size_t fields = 0;
  std::string body = csv.substr(csv.find('\n') + 1), cell;
  for (const char ch : body) {
    if (ch == ',' || ch == '\n') {
      CHECK(hypolab::report::format_double(std::stod(cell)) == cell);
      cell.clear();
      ++fields;
    } else {
      cell += ch;
    }
  }
  CHECK(fields == 4 * 50);
  CHECK(fs::exists(out / "tail.svg"));
}

TEST_CASE("probe plot carries the slope annotation and render reproduces the files") {
  const auto out = scratch() / "probe";
  REQUIRE(run_cli("run " + config("superlog_probe_alpha05.json") + " --out " + out.string()).code == 0);
  const auto svg = read_file(out / "lambda.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("balance exponent 4.3") != std::string::npos);
  CHECK(svg.find("fitted slope") != std::string::npos);
  // Both grids appear when the refinement check ran.
  CHECK(svg.find("n = 8193") != std::string::npos);
  CHECK(svg.find("n = 16385") != std::string::npos);
  const auto constant = read_file(out / "constant.svg");
  CHECK(constant.find("k &lt;= 20") != std::string::npos);
  CHECK(constant.find("k &lt;= 24") != std::string::npos);

  const auto again = scratch() / "probe_render";
  CHECK(run_cli("render " + (out / "report.json").string() + " --out " + again.string()).code == 0);
  for (const char* f : {"data.csv", "constant.csv", "lambda.svg", "constant.svg"}) {
    CAPTURE(f);
    CHECK(read_file(out / f) == read_file(again / f));
  }
}

TEST_CASE("render of an empty series writes a header-only CSV") {
  const Json rep{{"schema_version", 1},
                 {"kind", "superlog-probe"},
                 {"tables", Json::array({Json{{"file", "data.csv"},
                                              {"columns", {"zeta", "lambda_min", "ratio"}},
                                              {"rows", Json::array()}}})},
                 {"plots", Json::array({Json{{"file", "lambda.svg"}, {"series", Json::array()}}})}};
  const auto dir = scratch() / "empty";
  write_file(dir / "report.json", rep.dump());
  CHECK(run_cli("render " + (dir / "report.json").string()).code == 0);
  CHECK(read_file(dir / "data.csv") == "zeta,lambda_min,ratio\n");
  CHECK(read_file(dir / "lambda.svg").find("</svg>") != std::string::npos);

  write_file(dir / "old.json", Json{{"schema_version", 0}}.dump());
  CHECK(run_cli("render " + (dir / "old.json").string()).code == 1);
}

TEST_CASE("exit codes for negative and under-resolved outcomes") {
  const auto fails = write_config("mp_fails.json", Json{{"kind", "mp-check"},
                                                        {"coefficient", "exp(-abs(y)^(-2))"},
                                                        {"p", 1}});
  const auto rf = run_cli("run " + fails.string() + " --out " + (scratch() / "mp_fails").string());
  CHECK(rf.code == 2);
  CHECK(Json::parse(read_file(scratch() / "mp_fails" / "report.json"))["status"] == "fails");

  const auto coarse = write_config("coarse.json", Json{{"kind", "superlog-probe"},
                                                       {"coefficient", "exp(-abs(y)^(-0.5))"},
                                                       {"p", 1},
                                                       {"nodes", 129}});
  const auto rc = run_cli("run " + coarse.string() + " --out " + (scratch() / "coarse").string());
  CHECK(rc.code == 3);
  CHECK(Json::parse(read_file(scratch() / "coarse" / "report.json"))["results"]["under_resolved"] == true);

  CHECK(run_cli("run " + config("mp_check_alpha05.json") + " --out " + (scratch() / "mp_holds").string()).code == 0);
}

TEST_CASE("remaining example configs run clean") {
  for (const char* name : {"profile_elliptic.json", "profile_parabolic.json", "synthesis.json"}) {
    CAPTURE(name);
    const auto out = scratch() / name;
    CHECK(run_cli("run " + config(name) + " --out " + out.string()).code == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "data.csv"));
  }
}

TEST_CASE("suite subcommand runs selected criteria") {
  const auto r = run_cli("suite --only 5,10");
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS   5") != std::string::npos);
  CHECK(r.out.find("PASS  10") != std::string::npos);
  CHECK(r.out.find("summary: 2 passed") != std::string::npos);
}
