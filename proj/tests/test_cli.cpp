#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "stepfun/core.hpp"

namespace fs = std::filesystem;
using namespace stepfun;

namespace {

const std::string kCli = STEPFUN_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("stepfun_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = kCli + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write(const std::string& path, const std::string& content) {
  std::ofstream(path, std::ios::binary) << content;
}

}  // namespace

TEST_CASE("cli equiv verdicts map to exit codes") {
  TempDir dir;
  save(fixtures::flip(), dir.file("flip.json"));
  save(apply_permutations(fixtures::flip(), {0, 1}, {1, 0}), dir.file("flip_cs.json"));
  save(fixtures::tri(), dir.file("tri.json"));

  CHECK(run("equiv " + dir.file("flip.json") + " " + dir.file("flip_cs.json")) == 0);
  CHECK(run("equiv " + dir.file("flip.json") + " " + dir.file("tri.json")) == 1);
  CHECK(run("equiv " + dir.file("flip.json") + " " + dir.file("missing.json")) == 2);

  SUBCASE("skew mode") {
    save(fixtures::rowsame(), dir.file("rowsame.json"));
    CHECK(run("equiv --mode skew --variable rows " + dir.file("flip.json") + " " +
              dir.file("rowsame.json")) == 0);
    CHECK(run("equiv --mode skew --variable rows " + dir.file("flip.json") + " " +
              dir.file("tri.json")) == 1);
  }
  SUBCASE("witness is printed for positive verdicts") {
    const std::string out = dir.file("out.txt");
    REQUIRE(run("equiv " + dir.file("flip.json") + " " + dir.file("flip_cs.json"), out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("equivalent") != std::string::npos);
    CHECK(text.find("sigma:") != std::string::npos);
    CHECK(text.find("tau:") != std::string::npos);
  }
}

TEST_CASE("cli canon is byte-deterministic and purifies first") {
  TempDir dir;
  save(fixtures::constant(), dir.file("const.json"));
  REQUIRE(run("canon " + dir.file("const.json") + " -o " + dir.file("run1")) == 0);
  REQUIRE(run("canon " + dir.file("const.json") + " -o " + dir.file("run2")) == 0);
  const std::string canonical = slurp(dir.file("run1") + "/const.canonical.json");
  CHECK(canonical == slurp(dir.file("run2") + "/const.canonical.json"));
  CHECK(slurp(dir.file("run1") + "/const.fibers.json") ==
        slurp(dir.file("run2") + "/const.fibers.json"));
  // the quotient of the constant function is 1x1
  const StepFunction q = load(dir.file("run1") + "/const.canonical.json");
  CHECK(q.rows() == 1);
  CHECK(q.cols() == 1);
}

TEST_CASE("cli rejects corrupt input with exit 2") {
  TempDir dir;
  write(dir.file("bad.json"), "{ not valid");
  CHECK(run("canon " + dir.file("bad.json") + " -o " + dir.file("out")) == 2);
  write(dir.file("badsum.json"),
        R"({"alphabet":["a"],"row_weights":["1/2"],"col_weights":["1"],"values":[["a"]]})");
  CHECK(run("canon " + dir.file("badsum.json") + " -o " + dir.file("out")) == 2);
  CHECK(run("definitely-not-a-command") == 2);
}

TEST_CASE("cli sample is deterministic per seed and echoes the seed") {
  TempDir dir;
  save(fixtures::flip(), dir.file("flip.json"));
  REQUIRE(run("sample " + dir.file("flip.json") + " --k 4 --l 4 --seed 7 -o " +
              dir.file("m1.txt")) == 0);
  REQUIRE(run("sample " + dir.file("flip.json") + " --k 4 --l 4 --seed 7 -o " +
              dir.file("m2.txt")) == 0);
  CHECK(slurp(dir.file("m1.txt")) == slurp(dir.file("m2.txt")));
  CHECK(slurp(dir.file("m1.txt")).find("seed 7") != std::string::npos);
}

TEST_CASE("cli sjd output matches the joint-distribution examples") {
  TempDir dir;
  save(fixtures::flip(), dir.file("flip.json"));
  const std::string out = dir.file("sig.txt");
  REQUIRE(run("sjd " + dir.file("flip.json") + " --level 2", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("(0,1)\t(a,b)=1/2 (b,a)=1/2") != std::string::npos);
  CHECK(text.find("(0,0)\t(a,a)=1/2 (b,b)=1/2") != std::string::npos);
  SUBCASE("structured format parses and agrees") {
    const std::string jsout = dir.file("sig.json");
    REQUIRE(run("sjd " + dir.file("flip.json") + " --level 2 --format structured",
                jsout) == 0);
    const std::string js = slurp(jsout);
    CHECK(js.find("\"level\": 2") != std::string::npos);
    CHECK(js.find("\"mass\": \"1/2\"") != std::string::npos);
  }
}

TEST_CASE("cli marginal prints the exact rational") {
  TempDir dir;
  save(fixtures::flip(), dir.file("flip.json"));
  write(dir.file("pat.txt"), "a b\nb a\n");
  const std::string out = dir.file("m.txt");
  REQUIRE(run("marginal " + dir.file("flip.json") + " --pattern " + dir.file("pat.txt"),
              out) == 0);
  CHECK(slurp(out) == "1/8\n");
}

TEST_CASE("cli reconstruct round-trips a sample of tri") {
  TempDir dir;
  save(fixtures::tri(), dir.file("tri.json"));
  REQUIRE(run("sample " + dir.file("tri.json") + " --k 512 --l 512 --seed 12 -o " +
              dir.file("m.txt")) == 0);
  REQUIRE(run("reconstruct " + dir.file("m.txt") + " --max-denominator 8 -o " +
              dir.file("rec.json")) == 0);
  CHECK(run("equiv " + dir.file("rec.json") + " " + dir.file("tri.json")) == 0);
}

TEST_CASE("cli symmetries reports order and purity") {
  TempDir dir;
  save(fixtures::flip(), dir.file("flip.json"));
  const std::string out = dir.file("sym.txt");
  REQUIRE(run("symmetries " + dir.file("flip.json"), out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("order: 2") != std::string::npos);
  CHECK(text.find("pure: yes") != std::string::npos);
  CHECK(text.find("totally_pure: no") != std::string::npos);
}

TEST_CASE("cli mm-import builds diagonally comparable distance tables") {
  TempDir dir;
  write(dir.file("cloud1.json"),
        R"({"weights":["1/3","1/3","1/3"],"points":[["0"],["1"],["3"]]})");
  write(dir.file("cloud2.json"),
        R"({"weights":["1/3","1/3","1/3"],"points":[["3"],["0"],["1"]]})");
  write(dir.file("cloud3.json"),
        R"({"weights":["1/3","1/3","1/3"],"points":[["0"],["1"],["2"]]})");
  REQUIRE(run("mm-import " + dir.file("cloud1.json") + " -o " + dir.file("t1.json")) == 0);
  REQUIRE(run("mm-import " + dir.file("cloud2.json") + " -o " + dir.file("t2.json")) == 0);
  REQUIRE(run("mm-import " + dir.file("cloud3.json") + " -o " + dir.file("t3.json")) == 0);
  CHECK(run("equiv --mode diagonal " + dir.file("t1.json") + " " + dir.file("t2.json")) == 0);
  CHECK(run("equiv --mode diagonal " + dir.file("t1.json") + " " + dir.file("t3.json")) == 1);
  SUBCASE("explicit distance matrix mode") {
    write(dir.file("explicit.json"),
          R"({"weights":["1/3","1/3","1/3"],
              "distances":[["0","1","3"],["1","0","2"],["3","2","0"]]})");
    REQUIRE(run("mm-import " + dir.file("explicit.json") + " -o " + dir.file("te.json")) == 0);
    const StepFunction t = load(dir.file("te.json"));
    CHECK(t.alphabet.symbols == std::vector<std::string>{"0", "1", "2", "3"});
  }
  SUBCASE("asymmetric matrix is rejected") {
    write(dir.file("asym.json"),
          R"({"weights":["1/2","1/2"],"distances":[["0","1"],["2","0"]]})");
    CHECK(run("mm-import " + dir.file("asym.json") + " -o " + dir.file("x.json")) == 2);
  }
  SUBCASE("identical points collapse under canon") {
    write(dir.file("dup.json"),
          R"({"weights":["1/4","1/4","1/2"],"points":[["0"],["0"],["1"]]})");
    REQUIRE(run("mm-import " + dir.file("dup.json") + " -o " + dir.file("td.json")) == 0);
    CHECK(run("canon " + dir.file("td.json") + " -o " + dir.file("out")) == 0);
    const StepFunction q = load(dir.file("out") + "/td.canonical.json");
    CHECK(q.rows() == 2);
  }
}
