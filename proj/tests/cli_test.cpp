#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ACEP_BIN) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string spec(const char* name) { return std::string(ACEP_EXAMPLES) + "/" + name; }

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "acep_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("analyze h1 reports an S-witness and no_ACEP") {
  const Run r = run("analyze " + spec("h1.json") + " --skip-metric");
  REQUIRE(r.code == 0);
  const auto j = json_of(r);
  CHECK(j["schema"] == 1);
  CHECK(j["classification"]["label"] == "Case4");
  CHECK(j["classification"]["malnormal"] == false);
  CHECK(j["classification"]["cyclonormal"] == true);
  CHECK(j["s_subgroup"]["status"] == "yes");
  CHECK(j["s_subgroup"]["witness"]["w"] == "xxx");
  CHECK(j["verdict"] == "no_ACEP");
  CHECK_FALSE(j.contains("metric"));
}

TEST_CASE("analyze verdicts for the other examples") {
  struct Row {
    const char* file;
    const char* label;
    const char* s;
    const char* verdict;
  };
  for (const Row& row : {Row{"h2.json", "Case4", "no_within_bound", "undetermined"},
                         Row{"four_generator.json", "Case4", "no_within_bound", "undetermined"},
                         Row{"cyclic.json", "Case1", "no_within_bound", "has_ACEP"}}) {
    CAPTURE(row.file);
    const Run r = run("analyze " + spec(row.file));
    REQUIRE(r.code == 0);
    const auto j = json_of(r);
    CHECK(j["classification"]["label"] == row.label);
    CHECK(j["s_subgroup"]["status"] == row.s);
    CHECK(j["verdict"] == row.verdict);
    CHECK(j.contains("metric"));
  }
}

TEST_CASE("analyze writes dot files and a json report") {
  const auto dir = scratch();
  const auto out = dir / "report.json";
  const Run r = run("analyze " + spec("four_generator.json") + " --dot " + (dir / "dot").string() +
                    " --json " + out.string());
  REQUIRE(r.code == 0);
  for (const char* f : {"gamma.dot", "core.dot", "product.dot", "dotted.dot"}) {
    CAPTURE(f);
    CHECK(std::filesystem::file_size(dir / "dot" / f) > 0);
  }
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["graph"]["rank"] == 4);
}

TEST_CASE("closure positive and negative certificates") {
  const Run r = run("closure " + spec("free.json") + " --relators xx --target xxyXXY,x");
  REQUIRE(r.code == 0);
  const auto j = json_of(r);
  const auto& t = j["targets"];
  REQUIRE(t.size() == 2);
  CHECK(t[0]["resolved"] == true);
  CHECK_FALSE(t[0]["in_closure_F"].is_null());
  CHECK(t[0]["outside_closure_F"].is_null());
  CHECK(t[1]["resolved"] == true);
  CHECK(t[1]["in_closure_F"].is_null());
  CHECK_FALSE(t[1]["outside_closure_F"].is_null());
  CHECK(j["all_resolved"] == true);
}

TEST_CASE("closure exits 2 when the budget is exhausted") {
  const Run r = run("closure " + spec("free.json") +
                    " --relators xx --target yxxxxY --max-factors 1 --max-conjugator 0");
  CHECK(r.code == 2);
  CHECK(json_of(r)["all_resolved"] == false);
}

TEST_CASE("metric lengths") {
  const Run r = run("metric " + spec("h1.json") + " --words 1,xxxxxxy,yxxxY");
  REQUIRE(r.code == 0);
  const auto j = json_of(r);
  const auto& w = j["words"];
  REQUIRE(w.size() == 3);
  CHECK(w[0]["length"] == 0);
  CHECK(w[1]["length"] == 2);
  CHECK(w[2]["length"] == 3);
}

TEST_CASE("input errors exit 1 with a position") {
  const auto dir = scratch();
  {
    std::ofstream(dir / "alphabet.json") << "{\"alphabet\": [\"x\",\"y\"],\n \"generators\": [\"xz\"]}";
    const Run r = run("analyze " + (dir / "alphabet.json").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("line 2") != std::string::npos);
  }
  {
    std::ofstream(dir / "broken.json") << "{\"alphabet\": [\"x\",\"y\"],\n \"generators\": [\"xy\" ]";
    const Run r = run("analyze " + (dir / "broken.json").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("line 2") != std::string::npos);
  }
  CHECK(run("analyze " + (dir / "missing.json").string()).code == 1);
  CHECK(run("").code == 1);
  CHECK(run("closure " + spec("free.json") + " --relators xq --target x").code == 1);
}
